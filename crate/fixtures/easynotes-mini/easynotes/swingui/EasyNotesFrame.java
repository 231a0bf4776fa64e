package easynotes.swingui;

import java.awt.event.ActionEvent;
import javax.swing.JButton;
import javax.swing.JFrame;
import easynotes.concerns.*;

public class EasyNotesFrame extends JFrame {
    private final Runnable refresh = new Runnable() {
        @Filtering
        public void run() {
        }
    };

    @NoteAdding
    @NoteEditing
    private void addButtonActionPerformed(ActionEvent evt) {
        editor.commit();
    }

    @Unused
    private void runDirMenuItemActionPerformed(ActionEvent evt) {
    }

    class Toolbar {
        @NoteEditing
        private JButton saveButton;

        @Deprecated
        @Unused
        private JButton[] legacyButtons;
    }
}

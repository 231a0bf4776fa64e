package easynotes.swingui;

import javax.accessibility.Accessible;
import javax.swing.JComponent;
import javax.swing.JTextField;
import easynotes.concerns.Filtering;

/**
 * The FilterPanel class is a container for the filter controls.
 * <p>
 * Not safe for use from several threads.
 */
@NotThreadSafe
public class FilterPanel extends JComponent implements Accessible {
    @Filtering
    private final JTextField queryField = new JTextField(20);

    @Filtering
    public void apply() {
        notes.filter(queryField.getText());
    }
}

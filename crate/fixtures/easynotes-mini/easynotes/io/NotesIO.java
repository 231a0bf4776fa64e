package easynotes.io;

import java.io.File;
import java.io.IOException;
import easynotes.concerns.Persistence;
import easynotes.model.Notes;

@Persistence(format = "xml")
public class NotesIO {
    private static final String OPEN = "<notes attr=\"{\">";

    @Persistence
    public void save(File file, Notes notes) throws IOException {
        /* a brace in a comment } does not close the method */
        String s = OPEN + '}';
    }

    @Persistence
    public Notes load(final File file) throws IOException {
        return new Notes();
    }
}

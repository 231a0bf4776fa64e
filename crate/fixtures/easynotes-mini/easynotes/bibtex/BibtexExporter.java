package easynotes.bibtex;

import easynotes.concerns.*;
import easynotes.model.Note;

@Citing
public class BibtexExporter {
    @Citing
    @Todo(value = "escape braces", priority = 3)
    public String export(Note note, java.util.Map<String, java.util.List<String>> fields) {
        return "@misc{" + note + "}";
    }

    @Unused
    @Deprecated(since = "2.0", forRemoval = true)
    public String exportAll(Note[] notes) {
        return "";
    }
}

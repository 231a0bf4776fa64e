package easynotes.model;

import java.util.ArrayList;
import java.util.List;
import easynotes.concerns.*;

/**
 * The note collection. Views observe it.
 */
@Observer(role = "subject")
public class Notes {
    @Todo("replace with a sorted set")
    private final List<Note> notes = new ArrayList<>();

    private final List<NotesListener> listeners = new ArrayList<>();

    @NoteAdding
    public void add(Note note) {
        notes.add(note);
        for (NotesListener l : listeners) {
            l.noteAdded(note);
        }
    }

    @Filtering
    public List<Note> filter(String query, Tagging.Level... levels) {
        List<Note> out = new ArrayList<>();
        for (Note n : notes) {
            if (n.toString().contains(query)) {
                out.add(n);
            }
        }
        return out;
    }

    public interface NotesListener {
        @NoteAdding
        void noteAdded(Note note);
    }
}

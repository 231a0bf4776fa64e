package easynotes.model;

import easynotes.concerns.*;

@Tagging(tags = {"core", "entity"}, level = Tagging.Level.HIGH)
public class Note implements Comparable<Note> {
    @NoteEditing
    private String title, text;

    private final java.util.List<String> tags = new java.util.ArrayList<String>();

    @NoteAdding
    public Note(String title) {
        this.title = title;
    }

    @NoteEditing
    public void setText(String text) {
        this.text = text;
    }

    @Unused
    public int wordCount() {
        return text.split(" ").length;
    }

    @Override
    public int compareTo(Note other) {
        return title.compareTo(other.title);
    }

    public static class Link {
        @Citing
        @Tagging(tags = "link")
        String target;

        @Todo(value = "resolve relative targets", priority = 2)
        Link(String target) {
            this.target = target;
        }
    }
}

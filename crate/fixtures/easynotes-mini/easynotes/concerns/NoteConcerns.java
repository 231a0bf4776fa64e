package easynotes.concerns;

@Domain
@interface NoteAdding {
}

/**
 * Changing the title or text of an existing note.
 */
@Domain
@interface NoteEditing {
}

@Domain
@interface Filtering {
}

/** Producing BibTeX citations for notes. */
@Domain
@interface Citing {
}

@Domain
@interface Tagging {
    String[] tags() default {};

    Level level() default Level.LOW;

    enum Level { LOW, HIGH }
}

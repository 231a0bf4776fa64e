package easynotes.concerns;

@Design
@interface DesignPattern {
}

/** Observer is-a design pattern. */
@DesignPattern
@interface Observer {
    String role() default "subject";
}

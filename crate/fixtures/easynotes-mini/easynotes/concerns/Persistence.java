package easynotes.concerns;

@Design
public @interface Persistence {
    String format() default "xml";
}

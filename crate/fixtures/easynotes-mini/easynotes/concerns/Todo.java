package easynotes.concerns;

/**
 * Work left for later.
 *
 * The value says what.
 */
@Maintenance
public @interface Todo {
    String value();

    int priority() default 1;
}

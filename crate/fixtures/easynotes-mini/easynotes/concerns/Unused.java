package easynotes.concerns;

import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;

/**
 * Marks the methods not used in the rest of the code.
 */
@Maintenance
@Retention(RetentionPolicy.SOURCE)
public @interface Unused {
}

package easynotes.concerns;

import easynotes.model.User;

@Design
public @interface SecuredMethod {
    User.Role[] allowed() default {};
}

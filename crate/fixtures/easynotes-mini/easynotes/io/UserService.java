package easynotes.io;

import easynotes.concerns.*;
import easynotes.model.User;

public class UserService {
    @Persistence @SecuredMethod(allowed={User.ADMIN}) public addNewUser(User user) {
        store(user);
    }

    private void store(User user) {
    }
}

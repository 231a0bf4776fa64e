package easynotes.model;

public class User {
    public enum Role { ADMIN, GUEST }

    public static final Role ADMIN = Role.ADMIN;

    private final String name;

    public User(String name) {
        this.name = name;
    }
}

package demo;

public class Db {
    private static final String PASSWORD_ENV = System.getenv("DB_PASSWORD");
    private String password = "";

    boolean check(String password) {
        return password.equals(PASSWORD_ENV);
    }
}

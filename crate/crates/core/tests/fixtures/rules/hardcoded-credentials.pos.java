package demo;

public class Db {
    private static final String DB_PASSWORD = "hunter2";

    String connect(String user) {
        String secretKey = "s3cr3t";
        return user + DB_PASSWORD + secretKey;
    }
}

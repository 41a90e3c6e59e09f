package demo.application;

public class Application {
    public static void main(String[] args) {
        System.out.println("starting");
        try {
            start();
        } catch (IllegalStateException e) {
            e.printStackTrace();
        }
        System.err.printf("%d%n", 1);
    }
}

package demo;

public class LambdaExceptionWrappers {
    public void run(Runnable r) {
        try {
            r.run();
        } catch (Exception e) {
            report(e);
        }
    }

    public void fail() throws Exception {
        throw new RuntimeException("boom");
    }

    void report(Throwable t) {
        try {
            t.printStackTrace();
        } catch (final Throwable ignored) {
            return;
        }
    }
}

package demo.application;

import java.util.logging.Logger;

public class Service {
    private static final Logger LOG = Logger.getLogger("svc");

    void run(java.io.PrintStream out) {
        LOG.info("running");
        out.println("report");
    }
}

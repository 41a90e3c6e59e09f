package demo.wulian2front;

import java.nio.file.*;
import java.util.List;
import javax.servlet.http.*;

public class ConfigServlet extends HttpServlet {
    List<String> load(Path p) throws java.io.IOException {
        return Files.readAllLines(p);
    }

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws java.io.IOException {
        response.getWriter().write("ok");
    }
}

//! Generated multi-file Java projects of a requested size.

use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const NAMES: &[&str] = &["count", "total", "index", "limit", "value", "offset", "size", "step"];

fn statement(rng: &mut StdRng, out: &mut Vec<String>) {
    let n = |rng: &mut StdRng| NAMES[rng.gen_range(0..NAMES.len())];
    match rng.gen_range(0..6) {
        0 => out.push(format!("        {} = {} + {};", n(rng), n(rng), rng.gen_range(1..9))),
        1 => {
            out.push(format!("        if ({} > {}) {{", n(rng), rng.gen_range(0..50)));
            out.push(format!("            {} -= {};", n(rng), n(rng)));
            out.push("        }".to_string());
        }
        2 => {
            out.push(format!("        for (int i = 0; i < {}; i++) {{", n(rng)));
            out.push(format!("            {} += i * {};", n(rng), rng.gen_range(2..7)));
            out.push("        }".to_string());
        }
        3 => out.push(format!("        log.add(\"{}\" + {});", n(rng), n(rng))),
        4 => {
            out.push(format!("        while ({} < {} && {} != 0) {{", n(rng), n(rng), n(rng)));
            out.push(format!("            {}++;", n(rng)));
            out.push("        }".to_string());
        }
        _ => out.push(format!("        {} = Math.max({}, {});", n(rng), n(rng), n(rng))),
    }
}

/// Write Java sources under `root` totalling at least `loc` lines; returns the
/// number of lines written.
pub fn write_java_project(root: &Path, loc: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut written = 0;
    let mut file_no = 0;
    while written < loc {
        file_no += 1;
        let package = format!("gen.p{}", file_no % 4);
        let mut lines = vec![format!("package {package};"), String::new()];
        lines.push(format!("/** Generated class {file_no}. */"));
        lines.push(format!("public class C{file_no} {{"));
        lines.push("    private int count, total, index, limit, value, offset, size, step;".to_string());
        lines.push("    private final java.util.List<String> log = new java.util.ArrayList<>();".to_string());
        for m in 0..rng.gen_range(4..9) {
            lines.push(String::new());
            lines.push(format!("    /** Step {m}. */"));
            lines.push(format!("    public int m{m}() {{"));
            for _ in 0..rng.gen_range(3..10) {
                statement(&mut rng, &mut lines);
            }
            lines.push("        return count + total;".to_string());
            lines.push("    }".to_string());
        }
        lines.push("}".to_string());
        let dir = root.join("src").join(package.replace('.', "/"));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join(format!("C{file_no}.java")), lines.join("\n") + "\n").unwrap();
        written += lines.len();
    }
    written
}

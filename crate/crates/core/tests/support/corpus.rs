//! Random Java-like corpora with planted (optionally renamed) copies.

use debtscope::ingest::Language;
use debtscope::lexer::{tokenize, TokenStream};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const IDENTS: &[&str] = &["a", "b", "count", "total", "item", "list", "x"];

fn statement(rng: &mut StdRng) -> String {
    let id = |rng: &mut StdRng| IDENTS[rng.gen_range(0..IDENTS.len())];
    match rng.gen_range(0..5) {
        0 => format!("{} = {} + {};", id(rng), id(rng), rng.gen_range(0..4)),
        1 => format!("if ({} > {}) {{ {}(); }}", id(rng), rng.gen_range(0..3), id(rng)),
        2 => format!("{}.add({});", id(rng), id(rng)),
        3 => format!("for (int i = 0; i < {}; i++) {{ {}++; }}", id(rng), id(rng)),
        _ => format!("return {};", id(rng)),
    }
}

/// Token streams for 2-4 files, at most `max_tokens` code tokens overall.
pub fn generate(seed: u64, max_tokens: usize) -> Vec<TokenStream> {
    let mut rng = StdRng::seed_from_u64(seed);
    let file_count = rng.gen_range(2..=4);
    let mut files: Vec<Vec<String>> = vec![Vec::new(); file_count];
    let mut budget = max_tokens;
    'fill: loop {
        for f in 0..file_count {
            let planted = rng.gen_bool(0.15) && files.iter().any(|s| s.len() > 4);
            let lines: Vec<String> = if planted {
                let donors: Vec<usize> = (0..file_count).filter(|&d| files[d].len() > 4).collect();
                let donor = &files[donors[rng.gen_range(0..donors.len())]];
                let start = rng.gen_range(0..donor.len() - 3);
                let len = rng.gen_range(3..=(donor.len() - start).min(12));
                let rename = rng.gen_bool(0.3);
                donor[start..start + len]
                    .iter()
                    .map(|l| if rename { l.replace("total", "renamed") } else { l.clone() })
                    .collect()
            } else {
                vec![statement(&mut rng)]
            };
            for l in lines {
                let cost = tokenize(&l, Language::Java).tokens.len();
                if cost > budget {
                    break 'fill;
                }
                budget -= cost;
                files[f].push(l);
            }
        }
    }
    files
        .into_iter()
        .enumerate()
        .map(|(i, lines)| {
            let mut s = tokenize(&lines.join("\n"), Language::Java);
            s.file = format!("src/F{i}.java");
            s
        })
        .collect()
}

/// A 120-token Java method whose statements differ in arity, so it has no
/// periodic self-similarity.
pub fn ladder_function(name: &str, var: &str) -> String {
    let mut s = format!("void {name}() {{\n");
    for k in 1..=8 {
        let args = vec!["a"; k].join(", ");
        s.push_str(&format!("  {var} = f({args});\n"));
    }
    s.push_str("  return;\n}\n");
    s
}

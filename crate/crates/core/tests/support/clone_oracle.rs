//! Brute-force clone pair search: every pair of token positions across the
//! corpus is compared directly on normalized lexemes. No hashing, windows or
//! grouping, so it shares nothing with the detector beyond the definition.

use debtscope::clones::{CloneInstance, ClonePair};
use debtscope::lexer::{normalize_tokens, NormalizeMode, TokenStream};

struct File {
    name: String,
    lexemes: Vec<String>,
    lines: Vec<(u32, u32)>,
}

pub fn brute_force_pairs(
    streams: &[TokenStream],
    min_tokens: usize,
    min_lines: u32,
    mode: NormalizeMode,
) -> Vec<ClonePair> {
    let mut files: Vec<File> = streams
        .iter()
        .map(|s| File {
            name: s.file.clone(),
            lexemes: normalize_tokens(s, mode),
            lines: s.code_tokens().map(|t| (t.line, t.end_line())).collect(),
        })
        .collect();
    files.sort_by(|a, b| a.name.cmp(&b.name));

    let mut positions = Vec::new();
    for (f, file) in files.iter().enumerate() {
        for i in 0..file.lexemes.len() {
            positions.push((f, i));
        }
    }

    let mut out = Vec::new();
    for (x, &(fa, ia)) in positions.iter().enumerate() {
        for &(fb, ib) in &positions[x + 1..] {
            let (a, b) = (&files[fa], &files[fb]);
            if a.lexemes[ia] != b.lexemes[ib] {
                continue;
            }
            if ia > 0 && ib > 0 && a.lexemes[ia - 1] == b.lexemes[ib - 1] {
                continue;
            }
            let mut len = 0;
            while ia + len < a.lexemes.len() && ib + len < b.lexemes.len() && a.lexemes[ia + len] == b.lexemes[ib + len]
            {
                len += 1;
            }
            if fa == fb {
                len = len.min(ib - ia);
            }
            if len < min_tokens {
                continue;
            }
            let inst = |f: &File, i: usize| CloneInstance {
                file: f.name.clone(),
                start_line: f.lines[i].0,
                end_line: f.lines[i + len - 1].1,
                start_token: i,
                end_token: i + len,
            };
            let (first, second) = (inst(a, ia), inst(b, ib));
            if first.end_line - first.start_line + 1 < min_lines || second.end_line - second.start_line + 1 < min_lines
            {
                continue;
            }
            out.push(ClonePair { first, second });
        }
    }
    out.sort();
    out
}

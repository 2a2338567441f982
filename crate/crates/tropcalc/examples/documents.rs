//! Reading, evaluating and writing JSON documents without the binary.

use std::path::PathBuf;

use tropcalc::cli::expr;
use tropcalc::cli::io::Document;

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("line.json");
    let doc = Document::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    for (name, obj) in &doc.objects {
        println!("{name}: {}", obj.kind());
    }
    let e = expr::parse("wedge(L, pull(idmap, L))").unwrap();
    let result = expr::eval(&e, &doc).unwrap();
    let text = Document::single("result", result).to_text();
    print!("{text}");
    assert_eq!(Document::parse(&text).unwrap().to_text(), text);
}

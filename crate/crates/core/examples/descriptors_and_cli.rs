//! Generating a seeded instance, writing it as a JSON descriptor, reading it
//! back and running commands through the same entry point as the binary.

use hourglass::cli;
use hourglass::descriptor;
use hourglass::generate::{gen_instance, GenKind, GenParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = GenParams {
        kind: GenKind::Expr,
        depth: 2,
        max_size: 40,
        seed: 2,
        ..GenParams::default()
    };
    let expr = gen_instance(&params)?;
    let text = descriptor::to_string(&expr);
    assert_eq!(descriptor::parse_descriptor_str(&text)?, expr);
    println!(
        "generated expression of depth {} ({} bytes of JSON)",
        expr.depth(),
        text.len()
    );

    let dir = std::env::temp_dir().join(format!("hourglass-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("expr.json");
    std::fs::write(&path, &text)?;
    let input = path.to_str().expect("utf-8 temp path");

    for args in [
        vec![
            "hourglass",
            "extremal",
            "--input",
            input,
            "--direction",
            "min",
            "--format",
            "text",
        ],
        vec![
            "hourglass",
            "finiteness",
            "--input",
            input,
            "--n-max",
            "2",
            "--format",
            "text",
        ],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cli::run(&args, &mut out, &mut err);
        let out = String::from_utf8(out)?;
        println!("$ {} -> exit {code}", args[1..].join(" "));
        println!("{}", out.lines().next().unwrap_or(""));
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}

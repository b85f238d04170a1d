//! Reads raw LIBSVM text, scales it to [-1, 1], writes it back and undoes
//! the scaling.
//!
//!     cargo run --release --example libsvm_roundtrip

use locsvm::data::{apply_scaling, fit_scaling, parse_libsvm, write_libsvm};

const RAW: &str = "\
3.5 1:10 2:0.5
-1 1:2 3:7
0.25 2:4 3:1
12 1:6 2:2 3:3
";

fn main() -> locsvm::Result<()> {
    let raw = parse_libsvm(RAW.as_bytes())?;
    let scaling = fit_scaling(&raw)?;
    let scaled = apply_scaling(&scaling, &raw)?;

    let mut out = Vec::new();
    write_libsvm(&scaled, &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));

    let back = scaling.invert(&parse_libsvm(out.as_slice())?)?;
    for (a, b) in raw.samples().iter().zip(back.samples()) {
        println!("{:?} {} -> {:?} {}", a.features, a.label, b.features, b.label);
    }
    Ok(())
}

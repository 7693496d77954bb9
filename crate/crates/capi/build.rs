use std::path::Path;

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    // Regenerate the committed header so it can never drift from the source.
    cbindgen::generate(&crate_dir)
        .expect("cbindgen parses the crate")
        .write_to_file(Path::new(&crate_dir).join("include/star_ramsey.h"));
}

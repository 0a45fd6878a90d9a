use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    let bindings = cbindgen::generate_with_config(&dir, config).expect("header generation");
    let header = dir.join("include").join("cinf.h");
    std::fs::create_dir_all(header.parent().unwrap()).unwrap();
    let mut buf = Vec::new();
    bindings.write(&mut buf);
    if std::fs::read(&header).ok().as_deref() != Some(&buf[..]) {
        std::fs::write(&header, &buf).unwrap();
    }
}

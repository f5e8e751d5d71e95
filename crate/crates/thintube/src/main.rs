fn main() {
    // CLI wiring lands with the config module.
    eprintln!("thintube: command line front end not built yet");
    std::process::exit(64);
}

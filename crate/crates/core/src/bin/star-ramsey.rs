fn main() {
    std::process::exit(star_ramsey::cli::run())
}

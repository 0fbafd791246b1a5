fn main() {
    std::process::exit(mlosc::run(std::env::args_os()));
}

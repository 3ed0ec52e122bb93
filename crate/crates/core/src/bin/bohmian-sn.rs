fn main() {
    std::process::exit(bohmian_sn::cli::main_with_args(std::env::args_os()));
}

use std::process::exit;

fn main() {
    exit(timeline_cover::cli::run(std::env::args()));
}

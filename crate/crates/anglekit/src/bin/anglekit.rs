fn main() -> ! {
    anglekit::cli::main()
}

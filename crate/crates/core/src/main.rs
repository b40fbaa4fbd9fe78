fn main() {
    opinion_cusp::cli::main()
}

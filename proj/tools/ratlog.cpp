#include "ratlog/cli.hpp"

int main(int argc, char** argv) { return ratlog::cli::main(argc, argv); }

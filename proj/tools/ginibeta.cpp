#include "ginibeta/cli.hpp"

int main(int argc, char** argv) { return ginibeta::cli::main(argc, argv); }

#include "cli/app.hpp"

int main(int argc, char** argv) { return exsieve::cli::run(argc, argv); }

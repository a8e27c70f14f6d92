#include "cli.hpp"

int main(int argc, char** argv) { return tw::cli::run(argc, argv); }

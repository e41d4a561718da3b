#include "so42/cli.hpp"

int main(int argc, char** argv) { return so42::cli::run(argc, argv); }

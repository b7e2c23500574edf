#include "courserec/cli.hpp"

int main(int argc, char** argv) { return courserec::cli::run(argc, argv); }

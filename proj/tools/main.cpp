#include "cli.hpp"

int main(int argc, char** argv) { return mhls::cli::run(argc, argv); }

#include "cli.hpp"

int main(int argc, char **argv) { return vflite::cli::run(argc, argv); }

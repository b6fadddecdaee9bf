#include "app.hpp"

int main(int argc, char** argv) { return dualwave::cli::run_cli(argc, argv); }

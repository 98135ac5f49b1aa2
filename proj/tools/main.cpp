#include "cli_app.hpp"

int main(int argc, char** argv) { return fieldcbf::cli::run_cli(argc, argv); }

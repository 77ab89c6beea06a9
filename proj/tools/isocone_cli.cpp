#include "isocone/cli_app.hpp"

int main(int argc, char** argv) { return isocone::run_cli(argc, argv); }

#include "cli/app.hpp"

int main(int argc, char** argv) { return hamrep::cli::run(argc, argv); }

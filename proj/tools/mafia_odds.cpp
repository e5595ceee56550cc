#include "mafia_odds/cli.hpp"

int main(int argc, char** argv) { return mafia_odds::cli::run(argc, argv); }

#include <iostream>

#include "driftbound/app.hpp"

int main(int argc, char** argv) { return driftbound::app::run_cli(argc, argv, std::cout, std::cerr); }

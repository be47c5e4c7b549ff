#include <iostream>

#include "dtnmap/app.hpp"

int main(int argc, char** argv) { return dtn::app::run(argc, argv, std::cout, std::cerr); }

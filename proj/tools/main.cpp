#include "tdgl/cli.hpp"

int main(int argc, char** argv) { return tdgl::run_main(argc, argv); }

#include "pansharp/cli.hpp"

int main(int argc, char** argv) { return pansharp::cli_main(argc, argv); }

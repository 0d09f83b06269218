#include <mildns/cli.hpp>

int main(int argc, char** argv) { return mildns::cli_main(argc, argv); }

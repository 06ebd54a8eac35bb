#include "cli_app.hpp"

int main(int argc, char** argv) {
  return rotorwp::cli::run(argc, argv);
}

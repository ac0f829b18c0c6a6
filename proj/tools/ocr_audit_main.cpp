#include <string>
#include <vector>

#include "ocraudit/cli.hpp"

int main(int argc, char** argv) {
  return ocraudit::run_cli(std::vector<std::string>(argv, argv + argc));
}

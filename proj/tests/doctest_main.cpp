#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstring>
#include <vector>

// Path to the command-line binary, injected by ctest as --cli=<path> so the
// cli suite can spawn it.
const char* g_cli_path = nullptr;

int main(int argc, char** argv) {
  std::vector<char*> args;
  for (int i = 0; i < argc; ++i) {
    if (std::strncmp(argv[i], "--cli=", 6) == 0) {
      g_cli_path = argv[i] + 6;
      continue;
    }
    args.push_back(argv[i]);
  }
  doctest::Context context(static_cast<int>(args.size()), args.data());
  return context.run();
}

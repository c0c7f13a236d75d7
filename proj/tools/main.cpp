#include <cstdio>

int main() {
  std::puts("stacksdict: cli not wired yet");
  return 2;
}

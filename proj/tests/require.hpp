#pragma once
#include <cstdio>
#include <cstdlib>

// Minimal check macro for the test drivers: report and fail fast so the first
// broken invariant is the one shown.
#define REQUIRE(cond)                                                  \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::fprintf(stderr, "[FAIL] %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      std::exit(1);                                                    \
    }                                                                  \
  } while (0)

#define REQUIRE_EQ(a, b)                                                      \
  do {                                                                        \
    auto va_ = (a);                                                           \
    auto vb_ = (b);                                                           \
    if (!(va_ == vb_)) {                                                      \
      std::fprintf(stderr, "[FAIL] %s:%d: %s == %s  (lhs=%llu rhs=%llu)\n",   \
                   __FILE__, __LINE__, #a, #b,                                \
                   (unsigned long long)va_, (unsigned long long)vb_);         \
      std::exit(1);                                                           \
    }                                                                         \
  } while (0)

inline int test_done(const char* name) {
  std::printf("%s: all checks passed\n", name);
  return 0;
}

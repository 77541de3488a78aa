#pragma once

#include <cmath>
#include <string>

#include <doctest.h>

#include "stlight/error.hpp"

// Asserts that `expr` raises stlight::Error with the given code.
#define CHECK_CODE(expr, expected)                                    \
  do {                                                                \
    bool raised_ = false;                                             \
    try {                                                             \
      (void)(expr);                                                   \
    } catch (const stlight::Error& e_) {                              \
      raised_ = true;                                                 \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());              \
    }                                                                 \
    CHECK_MESSAGE(raised_, "expected an error from " #expr);          \
  } while (0)

inline double rel_err(double a, double b) { return std::abs(a / b - 1.0); }

inline const double kPi = std::acos(-1.0);

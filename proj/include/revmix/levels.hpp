#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "revmix/envelope.hpp"

namespace revmix {

// The nine per-level quantities of the recursive construction.  `I` is kept
// as a double: beyond the third level it exceeds the 64-bit integer range
// (its floor is then exact only to double resolution).
struct LevelParams {
    int j = 0;
    double B = 0.0;
    double eps_star = 0.0;
    double t = 0.0;
    double line_intercept = 0.0;
    double line_slope = 0.0;
    double eps = 0.0;
    double theta = 0.0;
    double theta_star = 0.0;
    double I = 0.0;
    double h = 0.0;
};

// springboard constants: eps = theta = 1/9, I = h = 1
LevelParams level_zero();

// Generates the next level from the history (which must start with
// level_zero()).  Throws HorizonTooSmall or NumericalUnderflow.
LevelParams next_level(std::span<const LevelParams> history, const Envelope& env);

enum class LevelHalt { TargetReached, Underflow, HorizonExhausted };

struct LevelGenResult {
    std::vector<LevelParams> levels;  // generated levels, j = 1..J
    LevelHalt halt = LevelHalt::TargetReached;
    std::string note;
};

// Generates levels until `max_levels` is reached (pass -1 for as many as
// binary64 and the horizon allow).  With an explicit target, running out of
// horizon raises HorizonTooSmall; in auto mode both halts are graceful.
LevelGenResult generate_levels(const Envelope& env, int max_levels = -1);

// Checks every structural identity of the generated list and throws
// ValidationFailure naming the first violation.
void validate_levels(std::span<const LevelParams> levels);

}  // namespace revmix

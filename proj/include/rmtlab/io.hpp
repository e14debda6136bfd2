#pragma once

#include <string>

#include "rmtlab/experiments.hpp"

namespace rmtlab {

inline const char* kVersion = "rmtlab-0.1.0";

// shortest decimal with up to 17 significant digits
std::string fmt17(double v);

// temp file in the same directory + rename; removes partial output on failure
void write_text_atomic(const std::string& path, const std::string& content);

// columns: eps,scale,successes,trials,p_hat,ci_lo,ci_hi (17 sig digits, LF)
std::string curve_to_csv(const TailCurve& curve);
TailCurve curve_from_csv(const std::string& text);

// log-log scatter plus exactly two reference polylines (fit, predicted)
std::string curve_to_svg(const TailCurve& curve, const ExponentFit& fit, double predicted);

} // namespace rmtlab

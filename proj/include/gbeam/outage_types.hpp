#pragma once

#include <string_view>

namespace gbeam {

/// Threshold regime of a link for a given beam and budget.
enum class OutageCase
{
    AlwaysConnected, // side-lobe floor already clears the threshold
    AlwaysOutage,    // boresight gain cannot reach it
    MainLobeRegime,
};

enum class EstimateMethod
{
    ClosedForm2D,
    Hoyt3D,
    Rayleigh3D,
    MonteCarlo,
    NumericalIntegral,
};

struct OutageEstimate
{
    double value = 0.0;
    EstimateMethod method = EstimateMethod::ClosedForm2D;
    double std_error = 0.0; // zero unless method == MonteCarlo
};

std::string_view to_string(OutageCase c);
std::string_view to_string(EstimateMethod m);

} // namespace gbeam

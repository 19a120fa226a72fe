#include "vfb/params.hpp"

#include <cmath>
#include <stdexcept>

namespace vfb {

EquationOfState make_eos(double gamma)
{
    if (!std::isfinite(gamma) || !(gamma > 1.0))
        throw std::domain_error("make_eos: gamma must be finite and > 1");
    EquationOfState eos;
    eos.gamma = gamma;
    eos.alpha = 1.0 / (gamma - 1.0);
    eos.beta  = 3.0 * (gamma - 1.0);
    return eos;
}

TimeWeights time_weights(double beta)
{
    if (!std::isfinite(beta) || !(beta > 0.0))
        throw std::domain_error("time_weights: beta must be finite and > 0");
    TimeWeights w;
    if (beta <= 2.0) {
        w.sigma1 = beta;
        w.sigma2 = 0.0;
    } else {
        w.sigma1 = 2.0;
        w.sigma2 = beta - 2.0;
    }
    return w;
}

} // namespace vfb

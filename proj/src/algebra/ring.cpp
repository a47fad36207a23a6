#include "chaintr/algebra/ring.hpp"

namespace chaintr {

double& floating_eps() {
    static double eps = 1e-12;
    return eps;
}

}  // namespace chaintr

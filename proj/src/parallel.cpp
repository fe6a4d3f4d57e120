#include "ratingdyn/parallel.hpp"

#include <omp.h>

namespace ratingdyn {

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace ratingdyn

#include "fieldent/parallel.hpp"

namespace fieldent {

unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0)
        return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

} // namespace fieldent

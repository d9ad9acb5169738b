#include "curveflow/parallel.hpp"

#include <cstdlib>
#include <string>

namespace curveflow {

std::size_t thread_count() {
    static const std::size_t cached = [] {
        const char* env = std::getenv("CURVEFLOW_THREADS");
        if (env == nullptr) return std::size_t{1};
        try {
            const long v = std::stol(env);
            return v >= 1 ? static_cast<std::size_t>(v) : std::size_t{1};
        } catch (...) {
            return std::size_t{1};
        }
    }();
    return cached;
}

}  // namespace curveflow

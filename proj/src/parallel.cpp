#include "shortpath/parallel.hpp"

#include <atomic>

namespace shortpath {

namespace {
std::atomic<unsigned> configured{0};
}

void set_thread_count(unsigned threads) { configured.store(threads); }

unsigned thread_count() {
    const unsigned t = configured.load();
    if (t != 0) return t;
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace shortpath

// Acceptance suite. With no arguments every criterion runs; otherwise only
// the listed ids (1-10). Exit status is nonzero when any criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "rainsw/acceptance.hpp"

int main(int argc, char** argv)
{
    namespace acc = rainsw::acceptance;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > static_cast<int>(acc::criteria().size())) {
            std::cerr << "unknown criterion: " << argv[i] << "\n";
            return 2;
        }
        ids.push_back(id);
    }
    if (ids.empty())
        for (std::size_t k = 1; k <= acc::criteria().size(); ++k) ids.push_back(static_cast<int>(k));

    int failed = 0;
    for (int id : ids) {
        const auto r = acc::evaluate(id);
        std::cout << acc::report_line(r) << std::endl;
        failed += !r.passed;
    }
    std::cout << ids.size() - failed << "/" << ids.size() << " passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

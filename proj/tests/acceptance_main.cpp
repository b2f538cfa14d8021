// One line per acceptance criterion; exit status 1 when any criterion fails.
#include <cstdlib>
#include <cstring>
#include <iostream>

#include "paranls/harness.hpp"

int main(int argc, char** argv) {
    paranls::AcceptanceOptions opt;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0)
            opt.quick = true;
        else
            only.push_back(std::atoi(argv[i]));
    }
    bool all = true;
    for (const auto& c : paranls::acceptance_criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        auto r = paranls::run_criterion(c, opt);
        std::cout << paranls::format_line(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace rst::cli {

/// Ordered "key: value" lines.
class Report {
public:
    template <class T>
    void add(std::string_view key, const T& value) {
        std::ostringstream os;
        os.precision(10);
        os << value;
        lines_.emplace_back(std::string(key) + ": " + os.str());
    }
    void raw(std::string line) { lines_.push_back(std::move(line)); }
    void print(std::ostream& out) const {
        for (const auto& l : lines_) out << l << '\n';
    }

private:
    std::vector<std::string> lines_;
};

}  // namespace rst::cli

#include "rst/ledger.hpp"

#include <cmath>
#include <cstdio>

namespace rst {

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::ResistanceInit: return "resistance_init";
        case Phase::ResistanceQuery: return "resistance_query";
        case Phase::MaxProductTree: return "max_product_tree";
        case Phase::IsoSample: return "iso_sample";
        case Phase::KSubset: return "k_subset";
        case Phase::WithReplacement: return "with_replacement";
        case Phase::DownStep: return "down_step";
        case Phase::Count: break;
    }
    return "unknown";
}

namespace cost {

double oracle_init(std::size_t m, std::size_t n, double eps) {
    return std::sqrt(static_cast<double>(m) * static_cast<double>(n)) / eps;
}

double tree_init(std::size_t m, std::size_t n) {
    return std::sqrt(static_cast<double>(m) * static_cast<double>(n));
}

double iso_sample(std::size_t m_prime, std::size_t k) {
    return std::sqrt(static_cast<double>(m_prime) * static_cast<double>(k));
}

double with_replacement(std::size_t domain_size, std::size_t draws) {
    return std::sqrt(static_cast<double>(domain_size) * static_cast<double>(draws));
}

}  // namespace cost

void QueryLedger::record(Phase p, std::uint64_t classical, double charged) {
    Slot& s = slots_[static_cast<std::size_t>(p)];
    s.invocations.fetch_add(1, std::memory_order_relaxed);
    s.classical.fetch_add(classical, std::memory_order_relaxed);
    if (charged != 0.0) s.charged.fetch_add(charged, std::memory_order_relaxed);
}

void QueryLedger::add_time(Phase p, std::chrono::nanoseconds elapsed) {
    slots_[static_cast<std::size_t>(p)].nanos.fetch_add(elapsed.count(), std::memory_order_relaxed);
}

std::uint64_t QueryLedger::invocations(Phase p) const {
    return slots_[static_cast<std::size_t>(p)].invocations.load();
}

std::uint64_t QueryLedger::classical_calls(Phase p) const {
    return slots_[static_cast<std::size_t>(p)].classical.load();
}

double QueryLedger::charged(Phase p) const { return slots_[static_cast<std::size_t>(p)].charged.load(); }

std::chrono::nanoseconds QueryLedger::elapsed(Phase p) const {
    return std::chrono::nanoseconds(slots_[static_cast<std::size_t>(p)].nanos.load());
}

std::uint64_t QueryLedger::total_classical_calls() const {
    std::uint64_t total = 0;
    for (const Slot& s : slots_) total += s.classical.load();
    return total;
}

double QueryLedger::total_charged() const {
    double total = 0.0;
    for (const Slot& s : slots_) total += s.charged.load();
    return total;
}

std::string QueryLedger::summary(bool with_timing) const {
    std::string out;
    char buf[96];
    for (std::size_t i = 0; i < kPhases; ++i) {
        const Slot& s = slots_[i];
        if (s.invocations.load() == 0) continue;
        const std::string name(phase_name(static_cast<Phase>(i)));
        out += "ledger." + name + ".invocations: " + std::to_string(s.invocations.load()) + "\n";
        out += "ledger." + name + ".classical_calls: " + std::to_string(s.classical.load()) + "\n";
        std::snprintf(buf, sizeof buf, "%.17g", s.charged.load());
        out += "ledger." + name + ".charged_queries: " + buf + "\n";
        if (with_timing) {
            std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(s.nanos.load()) * 1e-6);
            out += "ledger." + name + ".wall_ms: " + buf + "\n";
        }
    }
    std::snprintf(buf, sizeof buf, "%.17g", total_charged());
    out += "ledger.total.charged_queries: " + std::string(buf) + "\n";
    out += "ledger.total.classical_calls: " + std::to_string(total_classical_calls()) + "\n";
    return out;
}

}  // namespace rst

#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace rst {

/// Subroutines whose cost is tracked. Charged quantum-equivalent figures use
/// the closed forms in namespace `cost` with polylog factors set to 1.
enum class Phase : std::size_t {
    ResistanceInit,
    ResistanceQuery,
    MaxProductTree,
    IsoSample,
    KSubset,
    WithReplacement,
    DownStep,
    Count,
};

std::string_view phase_name(Phase p);

namespace cost {

/// Resistance-oracle initialization: sqrt(mn)/eps.
double oracle_init(std::size_t m, std::size_t n, double eps);
/// Maximum weight-product tree: sqrt(mn).
double tree_init(std::size_t m, std::size_t n);
/// One isotropic k-subset draw over m' copies: sqrt(m' k).
double iso_sample(std::size_t m_prime, std::size_t k);
/// A batch of k' independent draws over N copies: sqrt(N k').
double with_replacement(std::size_t domain_size, std::size_t draws);

}  // namespace cost

/// Per-phase counters. All counters are atomic and monotone; a ledger may be
/// shared by concurrent samplers.
class QueryLedger {
public:
    QueryLedger() = default;
    QueryLedger(const QueryLedger&) = delete;
    QueryLedger& operator=(const QueryLedger&) = delete;

    /// One invocation of `p`: `classical` actual oracle accesses plus a
    /// charged quantum-equivalent cost.
    void record(Phase p, std::uint64_t classical, double charged);
    void add_time(Phase p, std::chrono::nanoseconds elapsed);

    std::uint64_t invocations(Phase p) const;
    std::uint64_t classical_calls(Phase p) const;
    double charged(Phase p) const;
    std::chrono::nanoseconds elapsed(Phase p) const;

    std::uint64_t total_classical_calls() const;
    double total_charged() const;

    /// "key: value" lines, one group per phase that was used. Wall-clock
    /// lines are included only when `with_timing` is set.
    std::string summary(bool with_timing) const;

private:
    static constexpr std::size_t kPhases = static_cast<std::size_t>(Phase::Count);
    struct Slot {
        std::atomic<std::uint64_t> invocations{0};
        std::atomic<std::uint64_t> classical{0};
        std::atomic<double> charged{0.0};
        std::atomic<std::int64_t> nanos{0};
    };
    std::array<Slot, kPhases> slots_;
};

/// Adds the lifetime of the guard to a phase's wall-clock.
class PhaseTimer {
public:
    PhaseTimer(QueryLedger* ledger, Phase p)
        : ledger_(ledger), phase_(p), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        if (ledger_) ledger_->add_time(phase_, std::chrono::steady_clock::now() - start_);
    }
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

private:
    QueryLedger* ledger_;
    Phase phase_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace rst

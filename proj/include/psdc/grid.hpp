#ifndef PSDC_GRID_HPP
#define PSDC_GRID_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdc/layout.hpp"

namespace psdc {

/// Operand attribution for byte accounting.
enum class PayloadTag { generic, matrix_a, matrix_b };

/// Per-rank communication and work counters.  Message payloads are counted
/// at 8 bytes per double entry; headers are ignored.
struct GridStats {
    std::vector<std::int64_t> messages_sent;
    std::vector<std::int64_t> bytes_sent;
    std::vector<std::int64_t> bytes_received;
    std::vector<std::int64_t> bytes_sent_b;  ///< share of bytes_sent tagged matrix_b
    std::vector<std::int64_t> flops;

    explicit GridStats(int ranks = 0)
        : messages_sent(size_t(ranks), 0),
          bytes_sent(size_t(ranks), 0),
          bytes_received(size_t(ranks), 0),
          bytes_sent_b(size_t(ranks), 0),
          flops(size_t(ranks), 0) {}

    int ranks() const { return int(messages_sent.size()); }
    std::int64_t total_messages() const;
    std::int64_t total_bytes() const;
    std::int64_t total_bytes_received() const;
    std::int64_t total_bytes_b() const;
    std::int64_t total_flops() const;

    /// Accumulate another run's counters (same rank count).
    void accumulate(const GridStats& other);
};

/// All live ranks blocked on empty channels.
struct DeadlockError : std::runtime_error {
    explicit DeadlockError(std::vector<int> blocked_ranks);
    std::vector<int> blocked;
};

enum class Schedule { sequential, concurrent };

namespace detail {
class GridRuntime;
}

/// Handle a per-rank program uses for messaging and accounting.  Sends are
/// asynchronous counted copies into the receiver's mailbox; receives block
/// until the (sender, receiver) FIFO channel has a message.
class Rank {
public:
    int id() const { return id_; }
    int row() const;
    int col() const;
    const GridShape& grid() const;

    void send(int to, std::span<const double> data,
              PayloadTag tag = PayloadTag::generic);
    std::vector<double> recv(int from);
    void add_flops(std::int64_t n);

private:
    friend class detail::GridRuntime;
    Rank(detail::GridRuntime& rt, int id) : rt_(&rt), id_(id) {}
    detail::GridRuntime* rt_;
    int id_;
};

/// Executes one program instance per rank to completion and returns the
/// counters.  Results must be identical under both schedules: the only
/// shared state is the per-channel FIFO mailbox, so any data a program
/// observes is fixed by sender program order alone.
GridStats run_grid(const GridShape& grid,
                   const std::function<void(Rank&)>& program,
                   Schedule schedule = Schedule::sequential);

}  // namespace psdc

#endif

#include "psdc/grid.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace psdc {

std::int64_t GridStats::total_messages() const {
    return std::accumulate(messages_sent.begin(), messages_sent.end(),
                           std::int64_t(0));
}
std::int64_t GridStats::total_bytes() const {
    return std::accumulate(bytes_sent.begin(), bytes_sent.end(), std::int64_t(0));
}
std::int64_t GridStats::total_bytes_received() const {
    return std::accumulate(bytes_received.begin(), bytes_received.end(),
                           std::int64_t(0));
}
std::int64_t GridStats::total_bytes_b() const {
    return std::accumulate(bytes_sent_b.begin(), bytes_sent_b.end(),
                           std::int64_t(0));
}
std::int64_t GridStats::total_flops() const {
    return std::accumulate(flops.begin(), flops.end(), std::int64_t(0));
}

void GridStats::accumulate(const GridStats& other) {
    if (other.ranks() != ranks())
        throw std::invalid_argument("GridStats::accumulate: rank count mismatch");
    for (int r = 0; r < ranks(); ++r) {
        messages_sent[size_t(r)] += other.messages_sent[size_t(r)];
        bytes_sent[size_t(r)] += other.bytes_sent[size_t(r)];
        bytes_received[size_t(r)] += other.bytes_received[size_t(r)];
        bytes_sent_b[size_t(r)] += other.bytes_sent_b[size_t(r)];
        flops[size_t(r)] += other.flops[size_t(r)];
    }
}

namespace {
std::string deadlock_message(const std::vector<int>& blocked) {
    std::ostringstream os;
    os << "grid deadlock: all live ranks blocked on recv (ranks";
    for (int r : blocked) os << ' ' << r;
    os << ")";
    return os.str();
}
}  // namespace

DeadlockError::DeadlockError(std::vector<int> blocked_ranks)
    : std::runtime_error(deadlock_message(blocked_ranks)),
      blocked(std::move(blocked_ranks)) {}

namespace detail {

class GridRuntime {
public:
    GridRuntime(const GridShape& grid, Schedule sched)
        : grid_(grid),
          sched_(sched),
          stats_(grid.ranks()),
          channels_(size_t(grid.ranks()) * size_t(grid.ranks())),
          state_(size_t(grid.ranks()), State::parked),
          wait_from_(size_t(grid.ranks()), -1) {}

    GridStats run(const std::function<void(Rank&)>& program) {
        const int r = grid_.ranks();
        std::vector<std::thread> threads;
        threads.reserve(size_t(r));
        for (int id = 0; id < r; ++id)
            threads.emplace_back([this, id, &program] { worker(id, program); });
        for (auto& t : threads) t.join();
        if (error_) std::rethrow_exception(error_);
        if (deadlock_) throw DeadlockError(deadlocked_);
        return stats_;
    }

    const GridShape& grid() const { return grid_; }

    void send(int from, int to, std::span<const double> data, PayloadTag tag) {
        if (to < 0 || to >= grid_.ranks())
            throw std::invalid_argument("send: bad destination rank");
        std::unique_lock lk(mu_);
        channels_[channel(from, to)].emplace_back(data.begin(), data.end());
        stats_.messages_sent[size_t(from)] += 1;
        const std::int64_t bytes = 8 * std::int64_t(data.size());
        stats_.bytes_sent[size_t(from)] += bytes;
        if (tag == PayloadTag::matrix_b) stats_.bytes_sent_b[size_t(from)] += bytes;
        cv_.notify_all();
    }

    std::vector<double> recv(int id, int from) {
        if (from < 0 || from >= grid_.ranks())
            throw std::invalid_argument("recv: bad source rank");
        std::unique_lock lk(mu_);
        auto& ch = channels_[channel(from, id)];
        if (ch.empty()) {
            state_[size_t(id)] = State::wait_msg;
            wait_from_[size_t(id)] = from;
            if (sched_ == Schedule::sequential) advance_token(id);
            check_deadlock();
            cv_.wait(lk, [&] {
                return deadlock_ ||
                       (!ch.empty() && (sched_ == Schedule::concurrent ||
                                        token_ == id));
            });
            if (deadlock_) throw DeadlockError(deadlocked_);
            state_[size_t(id)] = State::running;
            wait_from_[size_t(id)] = -1;
        }
        std::vector<double> msg = std::move(ch.front());
        ch.pop_front();
        stats_.bytes_received[size_t(id)] += 8 * std::int64_t(msg.size());
        return msg;
    }

    void add_flops(int id, std::int64_t n) { stats_.flops[size_t(id)] += n; }

private:
    enum class State { parked, running, wait_msg, done };

    size_t channel(int from, int to) const {
        return size_t(from) * size_t(grid_.ranks()) + size_t(to);
    }

    void worker(int id, const std::function<void(Rank&)>& program) {
        {
            std::unique_lock lk(mu_);
            cv_.wait(lk, [&] {
                return deadlock_ || sched_ == Schedule::concurrent || token_ == id;
            });
            if (deadlock_) return;
            state_[size_t(id)] = State::running;
        }
        Rank rank(*this, id);
        std::exception_ptr err;
        try {
            program(rank);
        } catch (...) {
            err = std::current_exception();
        }
        {
            std::unique_lock lk(mu_);
            state_[size_t(id)] = State::done;
            if (err && !error_) error_ = err;
            if (sched_ == Schedule::sequential && token_ == id) advance_token(id);
            check_deadlock();
            cv_.notify_all();
        }
    }

    // Pass the token to the next rank able to make progress (mu_ held).
    void advance_token(int id) {
        const int r = grid_.ranks();
        for (int step = 1; step <= r; ++step) {
            const int cand = (id + step) % r;
            const State s = state_[size_t(cand)];
            if (s == State::done) continue;
            if (s == State::wait_msg &&
                channels_[channel(wait_from_[size_t(cand)], cand)].empty())
                continue;
            token_ = cand;
            cv_.notify_all();
            return;
        }
        // No rank can run; keep the token parked.  Either everything is done
        // or check_deadlock() will fire.
        token_ = -1;
    }

    // Deadlock: every live rank waits on an empty channel (mu_ held).
    void check_deadlock() {
        std::vector<int> blocked;
        for (int r = 0; r < grid_.ranks(); ++r) {
            const State s = state_[size_t(r)];
            if (s == State::done) continue;
            if (s == State::wait_msg &&
                channels_[channel(wait_from_[size_t(r)], r)].empty()) {
                blocked.push_back(r);
                continue;
            }
            return;  // someone can still make progress
        }
        if (blocked.empty()) return;  // everything finished
        deadlock_ = true;
        deadlocked_ = std::move(blocked);
        cv_.notify_all();
    }

    GridShape grid_;
    Schedule sched_;
    GridStats stats_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::vector<std::deque<std::vector<double>>> channels_;
    std::vector<State> state_;
    std::vector<int> wait_from_;
    int token_ = 0;
    bool deadlock_ = false;
    std::vector<int> deadlocked_;
    std::exception_ptr error_;
};

}  // namespace detail

int Rank::row() const { return rt_->grid().row_of(id_); }
int Rank::col() const { return rt_->grid().col_of(id_); }
const GridShape& Rank::grid() const { return rt_->grid(); }

void Rank::send(int to, std::span<const double> data, PayloadTag tag) {
    rt_->send(id_, to, data, tag);
}

std::vector<double> Rank::recv(int from) { return rt_->recv(id_, from); }

void Rank::add_flops(std::int64_t n) { rt_->add_flops(id_, n); }

GridStats run_grid(const GridShape& grid,
                   const std::function<void(Rank&)>& program,
                   Schedule schedule) {
    if (grid.p < 1 || grid.q < 1)
        throw std::invalid_argument("run_grid: bad grid shape");
    detail::GridRuntime rt(grid, schedule);
    return rt.run(program);
}

}  // namespace psdc

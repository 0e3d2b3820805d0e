#include <pbr/hbm_sim.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <deque>
#include <queue>
#include <set>
#include <unordered_map>

namespace pbr {
namespace {

constexpr std::uint32_t kMarkedStages = 4;   // input, tail, memory, head

struct Frag {
    std::uint32_t pkt;
    std::uint32_t bytes;
    std::int64_t slot;   // delivery slot of the first byte
};

struct Batch {
    std::uint32_t input = 0;
    std::uint32_t output = 0;
    std::vector<Frag> frags;
    std::uint32_t real = 0;
    std::int64_t oldest = 0;
    std::uint64_t uid = 0;
};

struct Frame {
    std::uint32_t output = 0;
    std::uint64_t seq = 0;
    std::uint32_t group = 0;
    std::vector<Batch> batches;
    std::uint64_t real = 0;
    std::size_t record = 0;
    bool bypassed = false;
    std::uint64_t after_seq = 0;   // marked frames only
    std::uint32_t stage = 0;
};

struct Voq {
    std::deque<Frag> frags;
    std::uint64_t bytes = 0;
};

struct Input {
    std::vector<std::size_t> pkts;
    std::size_t next = 0;
    std::uint32_t remaining = 0;
    bool started = false;
    std::vector<Voq> voq;
    std::deque<Batch> fifo;
    bool sending = false;
    std::uint32_t cur_output = 0;
    std::uint32_t cur_real = 0;
    std::uint64_t cur_uid = 0;
    std::uint32_t sent = 0;
    std::uint64_t occ = 0;
};

struct TailEntry {
    Batch batch;
    bool complete = false;
    std::int64_t tail_slot = 0;
};

struct Tail {
    std::deque<TailEntry> pending;
    std::uint64_t next_seq = 0;
};

struct OutFrag {
    std::int64_t slot;
    std::uint32_t pkt;
    std::uint32_t bytes;
};

struct Output {
    std::deque<Frame> head;
    bool active = false;
    std::uint32_t done = 0;
    std::size_t batch = 0;
    std::vector<OutFrag> pending;
    std::deque<std::uint32_t> tx;
    std::uint32_t tx_sent = 0;
    std::uint64_t next_delivered = 0;
    std::uint64_t occ = 0;
    std::uint64_t marked_occ = 0;
    std::deque<Frame> marked;
};

enum class EvKind { WritePass, ReadEnd };

struct Event {
    std::uint64_t slot;
    std::uint64_t order;
    EvKind kind;
    std::uint64_t uid;
    std::uint32_t pass;
    bool operator>(const Event& o) const { return slot != o.slot ? slot > o.slot : order > o.order; }
};

class Simulator {
public:
    Simulator(const Workload& w, const DerivedConfig& d, const SimOptions& opt)
        : w_(w), d_(d), opt_(opt), N_(d.cfg.N), P_(d.slice_bytes), k_(d.k), K_(d.K),
          B_(d.batches_per_frame), G_(d.bank_groups) {
        check_timing_feasible(d_);
        validate_workload(w_, N_, P_, opt_.limits);
        f_ = opt_.frames_per_phase ? opt_.frames_per_phase : G_;
        tr_.layout = make_cycle_layout(d_, f_);
        M_ = tr_.layout.slots_per_cycle;
        tr_.bound = sram_bound_bytes(d_);
        min_age_ = opt_.marked_min_age >= 0 ? opt_.marked_min_age : std::int64_t(K_ / P_ + 4 * N_);
        tr_.marked_min_age = min_age_;

        in_.resize(N_);
        for (auto& i : in_) i.voq.resize(N_);
        for (std::size_t n = 0; n < w_.size(); ++n) in_[w_[n].input].pkts.push_back(n);
        tail_.resize(N_);
        out_.resize(N_);
        store_.resize(N_);
        read_ptr_.assign(N_, 0);
        writes_inflight_.assign(N_, 0);
        dropped_seq_.resize(N_);
        recv_.assign(w_.size(), 0);
        marked_recv_.assign(w_.size(), 0);
        tr_.departure.assign(w_.size(), -1);

        if (opt_.slots) {
            slots_ = opt_.slots;
        } else {
            const std::int64_t last = w_.empty() ? 0 : w_.back().arrival_slot;
            slots_ = std::uint64_t(last) + 4 * N_ * M_ + 8 * (K_ / P_) + 64;
        }
        tr_.slots = slots_;
    }

    SimTrace run() {
        for (std::uint64_t t = 0; t < slots_; ++t) step(std::int64_t(t));
        return std::move(tr_);
    }

private:
    const Workload& w_;
    const DerivedConfig& d_;
    SimOptions opt_;
    std::uint32_t N_;
    std::uint32_t P_;
    std::uint64_t k_, K_, B_;
    std::uint32_t G_;
    std::uint32_t f_ = 1;
    std::uint64_t M_ = 1;
    std::int64_t min_age_ = 0;
    std::uint64_t slots_ = 0;

    std::vector<Input> in_;
    std::vector<Tail> tail_;
    std::deque<Frame> tail_fifo_;
    std::vector<std::deque<Frame>> store_;
    std::vector<std::uint64_t> read_ptr_;
    std::vector<std::uint32_t> writes_inflight_;
    std::vector<std::set<std::uint64_t>> dropped_seq_;
    std::unordered_map<std::uint64_t, Frame> inflight_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::vector<Output> out_;
    std::vector<std::uint32_t> recv_;
    std::vector<std::uint32_t> marked_recv_;

    std::uint64_t tail_occ_ = 0, hbm_occ_ = 0, head_occ_ = 0, marked_pipe_occ_ = 0;
    std::uint64_t hbm_frames_ = 0;
    std::uint64_t batch_uid_ = 0, frame_uid_ = 0, event_order_ = 0;
    SimTrace tr_;

    std::uint32_t slice_real(std::uint32_t real, std::uint32_t m) const {
        const std::int64_t r = std::int64_t(real) - std::int64_t(m) * P_;
        return std::uint32_t(std::clamp<std::int64_t>(r, 0, P_));
    }

    [[noreturn]] void invariant(const std::string& what, std::int64_t t) const {
        throw Error(ErrorKind::InvariantViolation, "hbm_sim", what + " at slot " + std::to_string(t));
    }

    void step(std::int64_t t) {
        for (std::uint32_t i = 0; i < N_; ++i) deliver(i, t);
        if (opt_.padding_timeout >= 0) pad_inputs(t);
        input_crossbar(t);
        if (opt_.padding_timeout >= 0) pad_tails(t);
        memory(t);
        for (std::uint32_t j = 0; j < N_; ++j) output_port(j, t);
        if (opt_.speedup_n && (t + 1) % opt_.speedup_n == 0) marked_step(t);
        account(t);
    }

    // ---- input side ----

    Batch take_from_voq(std::uint32_t i, std::uint32_t j, std::uint64_t limit) {
        Voq& v = in_[i].voq[j];
        Batch b;
        b.input = i;
        b.output = j;
        b.oldest = v.frags.front().slot;
        std::uint64_t take = std::min(limit, v.bytes);
        while (take > 0) {
            Frag& f = v.frags.front();
            const std::uint32_t n = std::uint32_t(std::min<std::uint64_t>(f.bytes, take));
            b.frags.push_back({f.pkt, n, f.slot});
            if (n == f.bytes) v.frags.pop_front();
            else f.bytes -= n;
            take -= n;
            b.real += n;
        }
        v.bytes -= b.real;
        return b;
    }

    void cut_batch(std::uint32_t i, std::uint32_t j, bool padded) {
        Batch b = take_from_voq(i, j, k_);
        ++tr_.counters.batches;
        if (padded) {
            ++tr_.counters.padded_batches;
            tr_.counters.pad_bytes += k_ - b.real;
        }
        in_[i].fifo.push_back(std::move(b));
    }

    void deliver(std::uint32_t i, std::int64_t t) {
        Input& in = in_[i];
        std::uint32_t budget = P_;
        while (budget > 0 && in.next < in.pkts.size()) {
            const std::size_t idx = in.pkts[in.next];
            const Packet& p = w_[idx];
            if (!in.started) {
                if (p.arrival_slot > t) break;
                if (p.arrival_slot < t)
                    throw Error(ErrorKind::RateViolation, "hbm_sim",
                                "input " + std::to_string(i + 1) + " cannot start packet " + std::to_string(p.id) +
                                    " in its arrival slot");
                in.started = true;
                in.remaining = p.size;
                Voq& v = in.voq[p.output];
                if (!opt_.allow_straddle && v.bytes > 0 && v.bytes + p.size > k_ && p.size <= k_)
                    cut_batch(i, p.output, true);
            }
            Voq& v = in.voq[p.output];
            const std::uint32_t n = std::min(budget, in.remaining);
            if (!v.frags.empty() && v.frags.back().pkt == idx) v.frags.back().bytes += n;
            else v.frags.push_back({std::uint32_t(idx), n, t});
            v.bytes += n;
            in.occ += n;
            tr_.counters.bytes_in += n;
            budget -= n;
            in.remaining -= n;
            while (v.bytes >= k_) cut_batch(i, p.output, false);
            if (in.remaining == 0) {
                ++in.next;
                in.started = false;
            }
        }
    }

    void pad_inputs(std::int64_t t) {
        for (std::uint32_t i = 0; i < N_; ++i)
            for (std::uint32_t j = 0; j < N_; ++j) {
                Voq& v = in_[i].voq[j];
                if (v.bytes > 0 && t - v.frags.front().slot >= opt_.padding_timeout) cut_batch(i, j, true);
            }
    }

    void input_crossbar(std::int64_t t) {
        std::vector<bool> used(N_, false);
        for (std::uint32_t i = 0; i < N_; ++i) {
            Input& in = in_[i];
            const std::uint32_t m = std::uint32_t((i + std::uint64_t(t)) % N_);
            if (!in.sending && !in.fifo.empty() && m == 0) {
                Batch b = std::move(in.fifo.front());
                in.fifo.pop_front();
                b.uid = batch_uid_++;
                in.sending = true;
                in.sent = 0;
                in.cur_output = b.output;
                in.cur_real = b.real;
                in.cur_uid = b.uid;
                tail_[b.output].pending.push_back({std::move(b), false, t});
            }
            if (!in.sending) continue;
            if (m != in.sent) invariant("input slice out of module order", t);
            if (used[m]) invariant("two slices for one tail module", t);
            used[m] = true;
            if (++in.sent == N_) {
                // a batch counts against the input until its last slice lands
                in.occ -= in.cur_real;
                tail_occ_ += in.cur_real;
                in.sending = false;
                auto& pend = tail_[in.cur_output].pending;
                auto it = std::find_if(pend.rbegin(), pend.rend(),
                                       [&](const TailEntry& e) { return e.batch.uid == in.cur_uid; });
                if (it == pend.rend()) invariant("batch lost in transit", t);
                it->complete = true;
                form_frames(in.cur_output, t);
            }
        }
    }

    // ---- tail ----

    void form_frame(std::uint32_t j, std::size_t count, std::int64_t t, bool padded) {
        Tail& tl = tail_[j];
        Frame f;
        f.output = j;
        f.seq = tl.next_seq++;
        f.group = std::uint32_t(f.seq % G_);
        for (std::size_t n = 0; n < count; ++n) {
            f.real += tl.pending.front().batch.real;
            f.batches.push_back(std::move(tl.pending.front().batch));
            tl.pending.pop_front();
        }
        FrameRecord rec;
        rec.output = j;
        rec.seq = f.seq;
        rec.group = f.group;
        rec.real_bytes = f.real;
        rec.padded_bytes = K_ - f.real;
        rec.formed_slot = t;
        f.record = tr_.frames.size();
        tr_.frames.push_back(rec);
        ++tr_.counters.frames_formed;
        if (padded) {
            ++tr_.counters.padded_frames;
            tr_.counters.pad_bytes += (B_ - count) * k_;
        }
        tail_fifo_.push_back(std::move(f));
    }

    void form_frames(std::uint32_t j, std::int64_t t) {
        auto& pend = tail_[j].pending;
        while (pend.size() >= B_ && pend[B_ - 1].complete) form_frame(j, B_, t, false);
    }

    std::size_t complete_prefix(std::uint32_t j) const {
        const auto& pend = tail_[j].pending;
        std::size_t c = 0;
        while (c < pend.size() && pend[c].complete) ++c;
        return c;
    }

    void pad_tails(std::int64_t t) {
        for (std::uint32_t j = 0; j < N_; ++j) {
            const auto& pend = tail_[j].pending;
            if (pend.empty() || !pend.front().complete) continue;
            if (t - pend.front().tail_slot < opt_.padding_timeout) continue;
            form_frame(j, complete_prefix(j), t, true);
        }
    }

    // ---- memory ----

    void schedule(std::uint64_t slot, EvKind kind, std::uint64_t uid, std::uint32_t pass = 0) {
        events_.push({slot, event_order_++, kind, uid, pass});
    }

    void skip_dropped(std::uint32_t j) {
        while (dropped_seq_[j].count(read_ptr_[j])) ++read_ptr_[j];
    }

    bool held_for_bypass(const Frame& f) {
        if (!opt_.bypass) return false;
        skip_dropped(f.output);
        return store_[f.output].empty() && writes_inflight_[f.output] == 0 && f.seq == read_ptr_[f.output];
    }

    void process_events(std::int64_t t) {
        while (!events_.empty() && events_.top().slot <= std::uint64_t(t)) {
            const Event ev = events_.top();
            events_.pop();
            auto it = inflight_.find(ev.uid);
            if (it == inflight_.end()) invariant("event for unknown frame", t);
            Frame& f = it->second;
            if (ev.kind == EvKind::WritePass) {
                if (ev.pass + 1 == d_.cfg.gamma) {
                    tr_.frames[f.record].written_slot = t;
                    ++tr_.counters.frames_written;
                    --writes_inflight_[f.output];
                    ++hbm_frames_;
                    store_[f.output].push_back(std::move(f));
                    inflight_.erase(it);
                }
            } else {
                if (f.bypassed) tail_occ_ -= f.real;
                else hbm_occ_ -= f.real;
                head_occ_ += f.real;
                tr_.frames[f.record].head_slot = t;
                out_[f.output].head.push_back(std::move(f));
                inflight_.erase(it);
            }
        }
    }

    void write_phase(std::uint64_t c) {
        const auto& L = tr_.layout;
        std::uint32_t q = 0;
        for (auto it = tail_fifo_.begin(); q < f_ && it != tail_fifo_.end();) {
            Frame& f = *it;
            if (held_for_bypass(f)) {
                ++it;
                continue;
            }
            if (opt_.hbm_capacity_frames &&
                hbm_frames_ + inflight_writes_total() >= opt_.hbm_capacity_frames) {
                tail_occ_ -= f.real;
                tr_.counters.dropped_bytes += f.real;
                ++tr_.counters.dropped_frames;
                tr_.frames[f.record].dropped = true;
                dropped_seq_[f.output].insert(f.seq);
                it = tail_fifo_.erase(it);
                continue;
            }
            if (opt_.record_commands)
                append_frame_schedule(tr_.commands, CmdKind::WR, {f.output, f.seq, f.group}, d_,
                                      double(c) * L.cycle_ns + L.write_start_ns(q));
            tail_occ_ -= f.real;   // streamed to the channel write buffers when the write issues
            hbm_occ_ += f.real;
            const std::uint64_t uid = frame_uid_++;
            for (std::uint32_t p = 0; p < d_.cfg.gamma; ++p)
                schedule(c * M_ + L.write_pass_end_slot[q * d_.cfg.gamma + p], EvKind::WritePass, uid, p);
            ++writes_inflight_[f.output];
            inflight_.emplace(uid, std::move(f));
            it = tail_fifo_.erase(it);
            ++q;
        }
    }

    std::uint64_t inflight_writes_total() const {
        std::uint64_t s = 0;
        for (auto x : writes_inflight_) s += x;
        return s;
    }

    void read_turn(std::uint64_t c, std::uint32_t q) {
        const auto& L = tr_.layout;
        const std::uint32_t j = std::uint32_t((c * f_ + q) % N_);
        skip_dropped(j);
        Frame f;
        bool have = false;
        if (!store_[j].empty() && store_[j].front().seq == read_ptr_[j]) {
            f = std::move(store_[j].front());
            store_[j].pop_front();
            --hbm_frames_;
            have = true;
            if (opt_.record_commands)
                append_frame_schedule(tr_.commands, CmdKind::RD, {f.output, f.seq, f.group}, d_,
                                      double(c) * L.cycle_ns + L.read_start_ns(q));
            ++tr_.counters.frames_read;
        } else if (opt_.bypass) {
            auto it = std::find_if(tail_fifo_.begin(), tail_fifo_.end(),
                                   [&](const Frame& x) { return x.output == j && x.seq == read_ptr_[j]; });
            if (it != tail_fifo_.end()) {
                f = std::move(*it);
                tail_fifo_.erase(it);
                f.bypassed = true;
                tr_.frames[f.record].bypassed = true;
                ++tr_.counters.bypasses;
                have = true;
            }
        }
        if (!have) {
            ++tr_.counters.idle_read_turns;
            return;
        }
        ++read_ptr_[j];
        const std::uint64_t uid = frame_uid_++;
        schedule(c * M_ + L.read_end_slot[q], EvKind::ReadEnd, uid);
        inflight_.emplace(uid, std::move(f));
    }

    void memory(std::int64_t t) {
        process_events(t);
        const std::uint64_t c = std::uint64_t(t) / M_;
        const std::uint64_t off = std::uint64_t(t) % M_;
        if (off == 0) write_phase(c);
        for (std::uint32_t q = 0; q < f_; ++q)
            if (tr_.layout.read_start_slot[q] == off) read_turn(c, q);
        process_events(t);
    }

    // ---- output side ----

    void complete_fragment(std::uint32_t j, std::uint32_t pkt, std::uint32_t bytes) {
        recv_[pkt] += bytes;
        if (recv_[pkt] == w_[pkt].size) out_[j].tx.push_back(pkt);
    }

    void output_port(std::uint32_t j, std::int64_t t) {
        Output& o = out_[j];
        const std::uint32_t m = std::uint32_t((j + std::uint64_t(t)) % N_);
        if (!o.active && !o.head.empty()) {
            const Frame& f = o.head.front();
            const bool gated = o.batch == 0 && !o.marked.empty() && o.marked.front().after_seq <= f.seq;
            if (!gated) {
                o.active = true;
                o.done = 0;
                std::uint64_t pos = 0;
                std::uint32_t lag = 0;   // reassembly keeps byte order inside the batch
                for (const Frag& fr : f.batches[o.batch].frags) {
                    const std::uint64_t s_lo = pos / P_, s_hi = (pos + fr.bytes - 1) / P_;
                    for (std::uint64_t s = s_lo; s <= s_hi; ++s)
                        lag = std::max(lag, std::uint32_t((s + N_ - m) % N_));
                    o.pending.push_back({t + lag, fr.pkt, fr.bytes});
                    pos += fr.bytes;
                }
            }
        }
        if (o.active) {
            Frame& f = o.head.front();
            const std::uint32_t r = slice_real(f.batches[o.batch].real, m);
            head_occ_ -= r;
            o.occ += r;
            if (++o.done == N_) {
                o.active = false;
                if (++o.batch == f.batches.size()) {
                    if (opt_.check_invariants && f.seq < o.next_delivered) invariant("frame order broken at output", t);
                    o.next_delivered = f.seq + 1;
                    tr_.frames[f.record].delivered_slot = t;
                    o.head.pop_front();
                    o.batch = 0;
                }
            }
        }
        if (!o.pending.empty()) {
            std::size_t keep = 0;
            for (std::size_t n = 0; n < o.pending.size(); ++n) {
                if (o.pending[n].slot <= t) complete_fragment(j, o.pending[n].pkt, o.pending[n].bytes);
                else o.pending[keep++] = o.pending[n];
            }
            o.pending.resize(keep);
        }
        std::uint32_t budget = P_;
        while (budget > 0 && !o.tx.empty()) {
            const std::uint32_t pkt = o.tx.front();
            const std::uint32_t size = w_[pkt].size;
            const std::uint32_t n = std::min(budget, size - o.tx_sent);
            const std::uint32_t reg_total = size - marked_recv_[pkt];
            const std::uint32_t reg_sent = std::min(o.tx_sent, reg_total);
            const std::uint32_t reg_now = std::min(n, reg_total - reg_sent);
            o.occ -= reg_now;
            o.marked_occ -= n - reg_now;
            o.tx_sent += n;
            budget -= n;
            tr_.counters.bytes_out += n;
            if (o.tx_sent == size) {
                tr_.departure[pkt] = t + 1;
                ++tr_.counters.packets_departed;
                o.tx.pop_front();
                o.tx_sent = 0;
            }
        }
    }

    // ---- speedup ----

    bool voq_eligible(std::uint32_t i, std::uint32_t j) const {
        const Input& in = in_[i];
        if (in.sending && in.cur_output == j) return false;
        for (const Batch& b : in.fifo)
            if (b.output == j) return false;
        for (const TailEntry& e : tail_[j].pending)
            if (e.batch.input == i) return false;
        return true;
    }

    void marked_step(std::int64_t t) {
        for (std::uint32_t j = 0; j < N_; ++j) {
            Output& o = out_[j];
            for (Frame& f : o.marked)
                if (f.stage < kMarkedStages) ++f.stage;
            while (!o.marked.empty() && o.marked.front().stage >= kMarkedStages &&
                   o.next_delivered >= o.marked.front().after_seq) {
                Frame& f = o.marked.front();
                for (const Batch& b : f.batches)
                    for (const Frag& fr : b.frags) {
                        marked_recv_[fr.pkt] += fr.bytes;
                        complete_fragment(j, fr.pkt, fr.bytes);
                    }
                marked_pipe_occ_ -= f.real;
                o.marked_occ += f.real;
                o.marked.pop_front();
            }
        }

        // oldest-bit candidate; tail partials rank as input N
        std::int64_t best_age = -1;
        std::uint32_t best_i = 0, best_j = 0;
        auto consider = [&](std::int64_t age, std::uint32_t i, std::uint32_t j) {
            if (age < min_age_) return;
            if (age > best_age || (age == best_age && std::tie(i, j) < std::tie(best_i, best_j))) {
                best_age = age;
                best_i = i;
                best_j = j;
            }
        };
        for (std::uint32_t i = 0; i < N_; ++i)
            for (std::uint32_t j = 0; j < N_; ++j) {
                const Voq& v = in_[i].voq[j];
                if (v.bytes > 0 && voq_eligible(i, j)) consider(t - v.frags.front().slot, i, j);
            }
        for (std::uint32_t j = 0; j < N_; ++j) {
            const auto& pend = tail_[j].pending;
            if (!pend.empty() && pend.front().complete) consider(t - pend.front().batch.oldest, N_, j);
        }
        if (best_age < 0) return;

        Frame f;
        f.output = best_j;
        f.after_seq = tail_[best_j].next_seq;
        if (best_i < N_) {
            Batch b = take_from_voq(best_i, best_j, k_);
            in_[best_i].occ -= b.real;
            f.real = b.real;
            f.batches.push_back(std::move(b));
        } else {
            const std::size_t c = complete_prefix(best_j);
            auto& pend = tail_[best_j].pending;
            for (std::size_t n = 0; n < c; ++n) {
                f.real += pend.front().batch.real;
                f.batches.push_back(std::move(pend.front().batch));
                pend.pop_front();
            }
            tail_occ_ -= f.real;
        }
        ++tr_.counters.marked_frames;
        tr_.counters.marked_bytes += f.real;
        marked_pipe_occ_ += f.real;
        out_[best_j].marked.push_back(std::move(f));
    }

    // ---- accounting ----

    void account(std::int64_t t) {
        std::array<std::uint64_t, 4> occ{};
        std::uint64_t marked = marked_pipe_occ_;
        for (const Input& in : in_) occ[kInputs] += in.occ;
        occ[kTail] = tail_occ_;
        occ[kHead] = head_occ_;
        for (const Output& o : out_) {
            occ[kOutputs] += o.occ;
            marked += o.marked_occ;
        }
        if (opt_.check_invariants) {
            const auto& c = tr_.counters;
            const std::uint64_t inside = occ[0] + occ[1] + occ[2] + occ[3] + hbm_occ_ + marked;
            if (c.bytes_in != inside + c.bytes_out + c.dropped_bytes) invariant("byte conservation failed", t);
        }
        std::uint64_t total = 0;
        for (std::size_t x = 0; x < 4; ++x) {
            tr_.max_occupancy[x] = std::max(tr_.max_occupancy[x], occ[x]);
            total += occ[x];
            if (occ[x] * 8 > tr_.bound.component_bits[x]) {
                ++tr_.bound_violation_slots[x];
                if (tr_.first_bound_violation < 0) tr_.first_bound_violation = t;
                if (opt_.assert_bounds) {
                    static const char* names[] = {"input", "tail", "head", "output"};
                    throw Error(ErrorKind::CapacityOverflow, "hbm_sim",
                                std::string(names[x]) + " SRAM holds " + std::to_string(occ[x]) + " B, bound " +
                                    std::to_string(tr_.bound.component_bits[x] / 8) + " B at slot " +
                                    std::to_string(t));
                }
            }
        }
        tr_.max_total_occupancy = std::max(tr_.max_total_occupancy, total);
        if (opt_.occupancy_stride && t % opt_.occupancy_stride == 0)
            tr_.occupancy.push_back({std::uint64_t(t), occ, hbm_occ_, marked});
    }
};

} // namespace

SimTrace run(const Workload& w, const DerivedConfig& d, const SimOptions& opt) {
    return Simulator(w, d, opt).run();
}

} // namespace pbr

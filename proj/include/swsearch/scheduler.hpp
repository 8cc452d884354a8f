#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "swsearch/align.hpp"
#include "swsearch/scoring.hpp"
#include "swsearch/sequence.hpp"

namespace swsearch {

/// Knobs for a database search. Worker count, lane width, and chunk width
/// change only how fast results arrive, never the results themselves.
struct SearchConfig {
    std::size_t worker_count = 1;
    std::size_t lane_width = 8;
    std::size_t chunk_width = 64;
    std::size_t length_threshold = 3000; // residues; >= goes to the wavefront path
    std::size_t top_k = 10;
    std::size_t cpu_pool_threads = 1; // workers preferring the lane-kernel queue
    bool compute_alignments = true;
    std::size_t traceback_memory_cap = std::size_t{256} << 20;

    void validate() const {
        if (worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
        if (lane_width < 1) throw std::invalid_argument("lane_width must be >= 1");
        if (chunk_width < 1) throw std::invalid_argument("chunk_width must be >= 1");
        if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
    }
};

/// Which kernel a chunk's sequences are scored with.
enum class KernelRoute : std::uint8_t { inter_task, intra_task };

/// Half-open range of positions into one routing pool's index list.
struct WorkChunk {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    KernelRoute route = KernelRoute::inter_task;
};

/// Length-based routing: sequences shorter than the threshold take the
/// lane (inter-task) path, the rest the wavefront (intra-task) path.
/// Original database indices are retained.
struct DatabasePartition {
    std::vector<std::uint32_t> short_pool;
    std::vector<std::uint32_t> long_pool;
};

inline DatabasePartition partition_database(const SequenceDatabase& db, std::size_t threshold) {
    DatabasePartition part;
    for (std::uint32_t i = 0; i < db.num_sequences(); ++i) {
        if (db.sequences[i].length() < threshold)
            part.short_pool.push_back(i);
        else
            part.long_pool.push_back(i);
    }
    return part;
}

/// Fixed set of chunks claimed exactly once each across any number of
/// concurrent workers (linearizable via a single fetch-add).
class ChunkQueue {
public:
    explicit ChunkQueue(std::vector<WorkChunk> chunks) : chunks_(std::move(chunks)) {}

    std::optional<WorkChunk> claim() {
        const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
        if (i >= chunks_.size()) return std::nullopt;
        return chunks_[i];
    }

    std::size_t size() const { return chunks_.size(); }

private:
    std::vector<WorkChunk> chunks_;
    std::atomic<std::size_t> next_{0};
};

/// One scored database sequence.
struct Hit {
    std::uint32_t db_index = 0;
    AlignScore score;
    std::optional<Alignment> alignment;

    bool operator==(const Hit& other) const {
        return db_index == other.db_index && score == other.score;
    }
};

/// Hits ordered by score descending, then database index ascending, and
/// truncated to top_k.
struct RankedResults {
    std::vector<Hit> hits;

    bool operator==(const RankedResults& other) const { return hits == other.hits; }
};

/// Merge per-worker hit lists into the global order and truncate.
inline RankedResults merge_results(std::vector<std::vector<Hit>> partials, std::size_t top_k) {
    RankedResults out;
    for (auto& part : partials)
        out.hits.insert(out.hits.end(), std::make_move_iterator(part.begin()),
                        std::make_move_iterator(part.end()));
    std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) {
        if (a.score.value != b.score.value) return a.score.value > b.score.value;
        return a.db_index < b.db_index;
    });
    if (out.hits.size() > top_k) out.hits.resize(top_k);
    return out;
}

/// Optional visibility into how a search was executed.
struct SearchStats {
    std::size_t lane_scored = 0;      // sequences scored by the lane kernel
    std::size_t wavefront_scored = 0; // sequences scored by the wavefront kernel
    std::size_t chunks_claimed = 0;
};

namespace detail {

// Short-pool chunks hold lane_width*16 subjects to amortize claim overhead;
// long-pool chunks are single sequences so stragglers balance dynamically.
inline std::vector<WorkChunk> make_chunks(std::size_t pool_size, std::size_t chunk_len,
                                          KernelRoute route) {
    std::vector<WorkChunk> chunks;
    for (std::size_t b = 0; b < pool_size; b += chunk_len) {
        const std::size_t e = std::min(pool_size, b + chunk_len);
        chunks.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e), route});
    }
    return chunks;
}

struct WorkerOutput {
    std::vector<Hit> hits;
    std::size_t lane_scored = 0;
    std::size_t wavefront_scored = 0;
    std::size_t chunks_claimed = 0;
};

inline void process_chunk(const WorkChunk& chunk, const DatabasePartition& part,
                          const EncodedSequence& query, const SequenceDatabase& db,
                          const QueryProfile& profile, const ScoringMatrix& matrix,
                          const GapModel& gaps, const SearchConfig& config, WorkerOutput& out) {
    ++out.chunks_claimed;
    if (chunk.route == KernelRoute::inter_task) {
        for (std::uint32_t pos = chunk.begin; pos < chunk.end; pos += config.lane_width) {
            const std::uint32_t lanes =
                std::min<std::uint32_t>(config.lane_width, chunk.end - pos);
            LaneBatch batch;
            batch.lane_width = config.lane_width;
            batch.subjects.reserve(lanes);
            for (std::uint32_t l = 0; l < lanes; ++l)
                batch.subjects.push_back(&db.sequences[part.short_pool[pos + l]]);
            const std::vector<AlignScore> scores = sw_score_batch(profile, batch, gaps);
            for (std::uint32_t l = 0; l < lanes; ++l)
                out.hits.push_back({part.short_pool[pos + l], scores[l], std::nullopt});
            out.lane_scored += lanes;
        }
    } else {
        for (std::uint32_t pos = chunk.begin; pos < chunk.end; ++pos) {
            const std::uint32_t db_index = part.long_pool[pos];
            const AlignScore score =
                sw_score_wavefront(query, db.sequences[db_index], matrix, gaps, config.chunk_width);
            out.hits.push_back({db_index, score, std::nullopt});
            ++out.wavefront_scored;
        }
    }
}

} // namespace detail

/// Search one query against the whole database. Results are a pure
/// function of (query, db, matrix, gaps, top_k, length_threshold):
/// identical to a sequential scalar scan followed by the (score desc,
/// index asc) sort and top_k truncation, for every worker/lane/chunk
/// configuration.
inline RankedResults run_search(const EncodedSequence& query, const SequenceDatabase& db,
                                const ScoringMatrix& matrix, const GapModel& gaps,
                                const SearchConfig& config, SearchStats* stats = nullptr) {
    config.validate();
    const QueryProfile profile = make_profile(matrix, query);
    const DatabasePartition part = partition_database(db, config.length_threshold);

    ChunkQueue inter_queue(
        detail::make_chunks(part.short_pool.size(), config.lane_width * 16, KernelRoute::inter_task));
    ChunkQueue intra_queue(
        detail::make_chunks(part.long_pool.size(), 1, KernelRoute::intra_task));

    const std::size_t workers = config.worker_count;
    const std::size_t pool_a = std::min(config.cpu_pool_threads, workers);
    std::vector<detail::WorkerOutput> outputs(workers);

    auto worker_fn = [&](std::size_t id) {
        // Pool A prefers the lane queue, pool B the wavefront queue; either
        // drains the other queue once its own is exhausted, so the split
        // balances dynamically without ever idling a worker.
        ChunkQueue* primary = id < pool_a ? &inter_queue : &intra_queue;
        ChunkQueue* secondary = id < pool_a ? &intra_queue : &inter_queue;
        detail::WorkerOutput& out = outputs[id];
        while (true) {
            std::optional<WorkChunk> chunk = primary->claim();
            if (!chunk) chunk = secondary->claim();
            if (!chunk) break;
            detail::process_chunk(*chunk, part, query, db, profile, matrix, gaps, config, out);
        }
    };

    if (workers == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        threads.reserve(workers);
        for (std::size_t id = 0; id < workers; ++id)
            threads.emplace_back([&, id] {
                try {
                    worker_fn(id);
                } catch (...) {
                    errors[id] = std::current_exception();
                }
            });
        for (std::thread& t : threads) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<std::vector<Hit>> partials;
    partials.reserve(workers);
    for (detail::WorkerOutput& out : outputs) {
        if (stats) {
            stats->lane_scored += out.lane_scored;
            stats->wavefront_scored += out.wavefront_scored;
            stats->chunks_claimed += out.chunks_claimed;
        }
        partials.push_back(std::move(out.hits));
    }
    RankedResults results = merge_results(std::move(partials), config.top_k);

    if (config.compute_alignments)
        for (Hit& hit : results.hits)
            hit.alignment = sw_align_traceback(query, db.sequences[hit.db_index], matrix, gaps,
                                               config.traceback_memory_cap);
    return results;
}

} // namespace swsearch

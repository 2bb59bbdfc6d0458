#include "ttsketch/als.hpp"

#include "ttsketch/error.hpp"
#include "ttsketch/linalg.hpp"

#include <string>

namespace ttsketch {

namespace {

void check_chain(const Shape& shape, const RankTuple& ranks)
{
    const std::size_t d = shape.order();
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t left = i == 0 ? 1 : ranks[i - 1];
        const std::size_t right = i + 1 == d ? 1 : ranks[i];
        if (right > left * shape[i] || left > shape[i] * right) {
            throw RankError("ALS: core " + std::to_string(i + 1) + " cannot carry ranks (" + std::to_string(left) +
                            ", " + std::to_string(right) + ")");
        }
    }
}

std::vector<DenseTensor> initial_cores(const Shape& shape, const RankTuple& ranks, const RngStream& rng)
{
    const std::size_t d = shape.order();
    std::vector<DenseTensor> cores;
    cores.reserve(d);
    cores.push_back(TTTensor::make_core(0, d, 1, shape[0], ranks[0], std::vector<double>(shape[0] * ranks[0], 0.0)));
    for (std::size_t i = 1; i < d; ++i) {
        const std::size_t left = ranks[i - 1];
        const std::size_t n = shape[i];
        const std::size_t right = i + 1 == d ? 1 : ranks[i];
        const GaussianField field(rng.substream(i + 1));
        std::vector<double> values(left * n * right);
        for (std::size_t a = 0; a < left; ++a) {
            for (std::size_t mu = 0; mu < n; ++mu) {
                const std::uint64_t h = extend_prefix_hash(0, mu);
                for (std::size_t b = 0; b < right; ++b) {
                    const std::uint64_t key = i + 1 == d ? h : extend_prefix_hash(h, b);
                    values[(a * n + mu) * right + b] = field.value(a, key);
                }
            }
        }
        cores.push_back(TTTensor::make_core(i, d, left, n, right, std::move(values)));
    }
    return cores;
}

double objective(const DenseTensor& f, const std::vector<DenseTensor>& cores)
{
    const double r = norm(subtract(f, tt_evaluate(TTTensor(cores))));
    return r * r;
}

}  // namespace

AlsResult als_half_sweep(const DenseTensor& f, const RankTuple& ranks, const RngStream& rng, std::size_t sweeps,
                         const AlsObserver& observer)
{
    const std::size_t d = f.order();
    if (d < 2) {
        throw ShapeError("ALS needs a tensor of order >= 2");
    }
    if (sweeps == 0) {
        throw DomainError("ALS: sweep count must be >= 1");
    }
    validate_ranks(f.shape(), ranks);
    check_chain(f.shape(), ranks);
    require_finite(f.values(), "ALS");
    if (norm(f) == 0.0) {
        throw UndefinedError("ALS: the target tensor is zero");
    }
    const std::vector<std::size_t>& dims = f.shape().dims();

    TTTensor t = orthogonalize_right(TTTensor(initial_cores(f.shape(), ranks, rng)));
    AlsResult result;
    std::size_t step = 0;

    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        if (sweep > 0) {
            t = orthogonalize_right(t);
        }
        std::vector<DenseTensor> cores = t.cores();

        // env[i]: cores i..d-1 contracted, r_{i-1} × (n_i⋯n_d), for i >= 1.
        std::vector<std::vector<double>> env(d);
        {
            const Matrix last = t.right_unfolding(d - 1);
            env[d - 1].assign(last.values().begin(), last.values().end());
        }
        for (std::size_t i = d - 2; i >= 1; --i) {
            const Matrix w = t.left_unfolding(i);
            const std::size_t right = t.right_rank(i);
            const ConstMatrixView next(env[i + 1].data(), static_cast<Eigen::Index>(right),
                                       static_cast<Eigen::Index>(env[i + 1].size() / right));
            const RowMajorMatrix merged = w.view() * next;
            env[i].assign(merged.data(), merged.data() + merged.size());
        }

        // y holds f projected onto the left-orthonormal cores so far, r_{i-1} × (n_i⋯n_d).
        std::vector<double> y(f.values().begin(), f.values().end());
        std::size_t left = 1;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t n = dims[i];
            const std::size_t rows = left * n;
            const std::size_t cols = y.size() / rows;
            const ConstMatrixView Y(y.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

            if (i + 1 == d) {
                cores[i] = TTTensor::make_core(i, d, left, n, 1, std::move(y));
                result.objective.push_back(objective(f, cores));
                if (observer) {
                    observer(step, TTTensor(cores));
                }
                ++step;
                break;
            }

            const std::size_t right = ranks[i];
            const ConstMatrixView P(env[i + 1].data(), static_cast<Eigen::Index>(right),
                                    static_cast<Eigen::Index>(cols));
            const RowMajorMatrix u = Y * P.transpose();
            cores[i] = TTTensor::make_core(i, d, left, n, right, std::vector<double>(u.data(), u.data() + u.size()));
            result.objective.push_back(objective(f, cores));
            if (observer) {
                observer(step, TTTensor(cores));
            }
            ++step;

            QrResult q = qr(Matrix(u));
            const RowMajorMatrix next = q.Q.view().transpose() * Y;
            cores[i] = TTTensor::make_core(i, d, left, n, right, std::move(q.Q).release());
            y.assign(next.data(), next.data() + next.size());
            left = right;
        }
        t = TTTensor(std::move(cores), Orthogonality::left);
    }
    result.tt = std::move(t);
    return result;
}

AlsResult als_half_sweep(const DenseTensor& f, const AlsConfig& cfg, const AlsObserver& observer)
{
    return als_half_sweep(f, cfg.ranks, RngStream(cfg.seed), cfg.sweeps, observer);
}

}  // namespace ttsketch

#include "finfree/partitions.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace finfree {

namespace {

void check_order(int j)
{
    if (j < 1 || j > max_partition_order)
        throw DomainError("partition order must lie in [1, " + std::to_string(max_partition_order) + "]");
}

BigInt factorial(int n)
{
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void integer_partitions(int remaining, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        integer_partitions(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

std::vector<PartitionType> build_types(int j)
{
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    integer_partitions(j, j, cur, parts);
    std::vector<PartitionType> types;
    const BigInt jf = factorial(j);
    for (auto& sizes : parts) {
        BigInt den = 1;
        std::map<int, int> mult;
        for (int s : sizes) {
            den *= factorial(s);
            ++mult[s];
        }
        for (auto& [s, m] : mult) den *= factorial(m);
        BigInt cnt = jf / den;
        types.push_back({sizes, cnt.convert_to<std::uint64_t>()});
    }
    return types;
}

BigInt binomial(int n, int k)
{
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// Set partitions of a labelled multiset of blocks, grouped by number of parts. The state
// is the multiplicity of each block size; weight of a part = 1/(d)_{total size}.
class CoarseningSolver {
public:
    CoarseningSolver(int d, int maxsize) : d_(d), maxsize_(maxsize)
    {
        inv_falling_.resize(static_cast<std::size_t>(maxsize) + 1);
        for (int m = 0; m <= maxsize; ++m) {
            BigInt f = 1;
            for (int i = 0; i < m; ++i) f *= (d - i);
            if (f == 0) throw DomainError("coarsening weight: block larger than degree");
            inv_falling_[m] = Rational(BigInt(1), f);
        }
    }

    // result[k] = sum over partitions into k parts of the product of part weights
    const std::vector<Rational>& solve(const std::vector<int>& mult)
    {
        auto it = memo_.find(mult);
        if (it != memo_.end()) return it->second;
        std::vector<Rational> res;
        int first = -1;
        for (std::size_t s = 1; s < mult.size(); ++s)
            if (mult[s] > 0) {
                first = static_cast<int>(s);
                break;
            }
        if (first < 0) {
            res = {Rational(1)};
            return memo_.emplace(mult, std::move(res)).first->second;
        }
        std::vector<int> rest = mult;
        rest[first] -= 1;
        // choose the companions of the distinguished block of size `first`
        std::vector<int> take(mult.size(), 0);
        enumerate(rest, take, 1, first, BigInt(1), res);
        return memo_.emplace(mult, std::move(res)).first->second;
    }

private:
    void enumerate(const std::vector<int>& rest, std::vector<int>& take, std::size_t s, int size_sum,
                   const BigInt& ways, std::vector<Rational>& res)
    {
        if (s == rest.size()) {
            std::vector<int> left = rest;
            for (std::size_t t = 1; t < left.size(); ++t) left[t] -= take[t];
            const std::vector<Rational> sub = solve(left);
            Rational w = Rational(ways) * inv_falling_[size_sum];
            if (res.size() < sub.size() + 1) res.resize(sub.size() + 1, Rational(0));
            for (std::size_t k = 0; k < sub.size(); ++k)
                if (sub[k] != 0) res[k + 1] += w * sub[k];
            return;
        }
        for (int t = 0; t <= rest[s]; ++t) {
            take[s] = t;
            enumerate(rest, take, s + 1, size_sum + static_cast<int>(s) * t, ways * binomial(rest[s], t), res);
        }
        take[s] = 0;
    }

    int d_;
    int maxsize_;
    std::vector<Rational> inv_falling_;
    std::map<std::vector<int>, std::vector<Rational>> memo_;
};

} // namespace

PartitionStream::PartitionStream(int j) : j_(j)
{
    check_order(j);
}

void PartitionStream::restart()
{
    started_ = false;
    done_ = false;
}

bool PartitionStream::next(Partition& out)
{
    if (done_) return false;
    if (!started_) {
        a_.assign(static_cast<std::size_t>(j_), 0);
        max_.assign(static_cast<std::size_t>(j_), 0);
        started_ = true;
    } else {
        int i = j_ - 1;
        while (i > 0 && a_[i] == max_[i - 1] + 1) --i;
        if (i == 0) {
            done_ = true;
            return false;
        }
        ++a_[i];
        max_[i] = std::max(max_[i - 1], a_[i]);
        for (int k = i + 1; k < j_; ++k) {
            a_[k] = 0;
            max_[k] = max_[k - 1];
        }
    }
    out.assign(static_cast<std::size_t>(max_[j_ - 1]) + 1, Block{});
    for (int k = 0; k < j_; ++k) out[a_[k]].push_back(k + 1);
    return true;
}

std::vector<Partition> partitions(int j)
{
    PartitionStream stream(j);
    std::vector<Partition> all;
    Partition p;
    while (stream.next(p)) all.push_back(p);
    return all;
}

std::uint64_t bell_number(int j)
{
    if (j < 0 || j > 25) throw DomainError("bell_number: order out of range");
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= j; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

const std::vector<PartitionType>& partition_types(int j)
{
    check_order(j);
    static std::mutex mu;
    static std::map<int, std::vector<PartitionType>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(j);
    if (it == cache.end()) it = cache.emplace(j, build_types(j)).first;
    return it->second;
}

const Rational& coarsening_weight(const std::vector<int>& sizes, int d)
{
    static std::mutex mu;
    static std::map<std::pair<std::vector<int>, int>, Rational> cache;
    static std::map<int, std::unique_ptr<CoarseningSolver>> solvers;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(sizes, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int total = 0;
    for (int s : sizes) total += s;
    if (total > d) throw DomainError("coarsening weight: order exceeds degree");
    auto& solver = solvers[d];
    if (!solver) solver = std::make_unique<CoarseningSolver>(d, std::min(d, max_partition_order));
    std::vector<int> mult(static_cast<std::size_t>(total) + 1, 0);
    for (int s : sizes) ++mult[s];
    const std::vector<Rational> by_parts = solver->solve(mult);
    Rational w = 0;
    BigInt fact = 1;  // (k-1)!
    for (std::size_t k = 1; k < by_parts.size(); ++k) {
        if (k > 1) fact *= static_cast<long>(k - 1);
        Rational term = Rational(fact) * by_parts[k];
        if (k % 2) w -= term;
        else w += term;
    }
    return cache.emplace(key, w).first->second;
}

} // namespace finfree

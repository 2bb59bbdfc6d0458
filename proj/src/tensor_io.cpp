#include "ttsketch/io.hpp"

#include "ttsketch/error.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

namespace ttsketch {

namespace {

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::size_t extent(const char* what)
    {
        long long v = 0;
        if (!(in_ >> v)) {
            throw FormatError(std::string("expected ") + what);
        }
        if (v <= 0) {
            throw FormatError(std::string(what) + " must be positive");
        }
        return static_cast<std::size_t>(v);
    }

    std::size_t count(const char* what)
    {
        long long v = 0;
        if (!(in_ >> v) || v < 0) {
            throw FormatError(std::string("expected nonnegative ") + what);
        }
        return static_cast<std::size_t>(v);
    }

    double value()
    {
        double v = 0.0;
        if (!(in_ >> v)) {
            throw FormatError("expected a numeric value");
        }
        return v;
    }

    void expect_end()
    {
        std::string extra;
        if (in_ >> extra) {
            throw FormatError("unexpected trailing data '" + extra + "'");
        }
    }

private:
    std::istream& in_;
};

Shape read_shape(Reader& r)
{
    const std::size_t d = r.extent("order");
    std::vector<std::size_t> dims(d);
    for (std::size_t& n : dims) {
        n = r.extent("mode extent");
    }
    return Shape(std::move(dims));
}

void write_shape(std::ostream& out, const char* keyword, const Shape& shape)
{
    out << keyword << ' ' << shape.order();
    for (std::size_t n : shape.dims()) {
        out << ' ' << n;
    }
}

void write_values(std::ostream& out, std::span<const double> values, std::size_t perLine)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << values[i] << ((i + 1) % perLine == 0 || i + 1 == values.size() ? '\n' : ' ');
    }
}

DenseTensor read_dense_body(Reader& r)
{
    Shape shape = read_shape(r);
    std::vector<double> values(shape.dense_size());
    for (double& v : values) {
        v = r.value();
    }
    return DenseTensor(std::move(shape), std::move(values));
}

SparseTensor read_sparse_body(Reader& r)
{
    Shape shape = read_shape(r);
    const std::size_t nnz = r.count("entry count");
    const std::size_t d = shape.order();
    std::vector<std::size_t> indices;
    std::vector<double> values;
    indices.reserve(nnz * d);
    values.reserve(nnz);
    for (std::size_t e = 0; e < nnz; ++e) {
        for (std::size_t m = 0; m < d; ++m) {
            const std::size_t i = r.extent("index");
            if (i > shape[m]) {
                throw FormatError("sparse entry " + std::to_string(e + 1) + " has an index out of range");
            }
            indices.push_back(i - 1);
        }
        values.push_back(r.value());
    }
    return SparseTensor(std::move(shape), std::move(indices), std::move(values));
}

TTTensor read_tt_body(Reader& r)
{
    const Shape shape = read_shape(r);
    const std::size_t d = shape.order();
    if (d < 2) {
        throw FormatError("a tensor train needs order >= 2");
    }
    std::vector<std::size_t> ranks(d - 1);
    for (std::size_t& k : ranks) {
        k = r.extent("rank");
    }
    std::vector<DenseTensor> cores;
    cores.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t left = i == 0 ? 1 : ranks[i - 1];
        const std::size_t right = i + 1 == d ? 1 : ranks[i];
        std::vector<double> values(left * shape[i] * right);
        for (double& v : values) {
            v = r.value();
        }
        cores.push_back(TTTensor::make_core(i, d, left, shape[i], right, std::move(values)));
    }
    return TTTensor(std::move(cores));
}

}  // namespace

void write_dense(std::ostream& out, const DenseTensor& x)
{
    out << std::setprecision(17);
    write_shape(out, "dense", x.shape());
    out << '\n';
    write_values(out, x.values(), x.shape()[x.order() - 1]);
}

void write_sparse(std::ostream& out, const SparseTensor& x)
{
    out << std::setprecision(17);
    write_shape(out, "sparse", x.shape());
    out << ' ' << x.nnz() << '\n';
    for (std::size_t e = 0; e < x.nnz(); ++e) {
        for (std::size_t i : x.index(e)) {
            out << i + 1 << ' ';
        }
        out << x.value(e) << '\n';
    }
}

void write_tt(std::ostream& out, const TTTensor& t)
{
    out << std::setprecision(17);
    write_shape(out, "tt", t.shape());
    for (std::size_t r : t.ranks().values()) {
        out << ' ' << r;
    }
    out << '\n';
    for (std::size_t i = 0; i < t.order(); ++i) {
        out << '\n';
        write_values(out, t.core(i).values(), t.right_rank(i) * t.shape()[i]);
    }
}

TensorFile read_tensor(std::istream& in)
{
    std::string keyword;
    if (!(in >> keyword)) {
        throw FormatError("empty tensor file");
    }
    Reader r(in);
    TensorFile result;
    if (keyword == "dense") {
        result = read_dense_body(r);
    } else if (keyword == "sparse") {
        result = read_sparse_body(r);
    } else if (keyword == "tt") {
        result = read_tt_body(r);
    } else {
        throw FormatError("unknown tensor format '" + keyword + "'");
    }
    r.expect_end();
    return result;
}

TensorFile read_tensor_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return read_tensor(in);
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& value)
{
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DenseTensor>) {
                write_dense(out, v);
            } else if constexpr (std::is_same_v<T, SparseTensor>) {
                write_sparse(out, v);
            } else {
                write_tt(out, v);
            }
        },
        value);
    if (!out.flush()) {
        throw FormatError("write to " + path.string() + " failed");
    }
}

}  // namespace ttsketch

// SPDX-License-Identifier: Apache-2.0
// Python extension: opaque index handles over the core library.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include "rsr/error.hpp"
#include "rsr/index_store.hpp"
#include "rsr/indexer.hpp"
#include "rsr/kernels.hpp"
#include "rsr/matrix.hpp"
#include "rsr/tuner.hpp"
#include "rsr/variant.hpp"

namespace py = pybind11;

namespace {

// Immutable after construction, so concurrent multiplies are safe.
class Index {
public:
  explicit Index(rsr::StoredIndex index) : index_(std::move(index)) {}

  const rsr::StoredIndex& get() const noexcept { return index_; }
  std::size_t rows() const {
    return std::visit([](const auto& i) -> std::size_t { return rows_of(i); }, index_);
  }
  std::size_t cols() const {
    return std::visit([](const auto& i) -> std::size_t { return cols_of(i); }, index_);
  }
  std::size_t k() const {
    return std::visit([](const auto& i) -> std::size_t { return k_of(i); }, index_);
  }
  std::string kind() const { return std::holds_alternative<rsr::TernaryIndex>(index_) ? "ternary" : "binary"; }

private:
  static std::size_t rows_of(const rsr::RsrIndex& i) { return i.rows; }
  static std::size_t rows_of(const rsr::TernaryIndex& i) { return i.rows(); }
  static std::size_t cols_of(const rsr::RsrIndex& i) { return i.cols; }
  static std::size_t cols_of(const rsr::TernaryIndex& i) { return i.cols(); }
  static std::size_t k_of(const rsr::RsrIndex& i) { return i.k; }
  static std::size_t k_of(const rsr::TernaryIndex& i) { return i.k(); }

  rsr::StoredIndex index_;
};

template <class T>
rsr::TernaryMatrix copy_ternary(const py::array& array) {
  auto a = py::array_t<T, py::array::c_style | py::array::forcecast>::ensure(array);
  if (!a) throw py::type_error("cannot read the matrix buffer");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  const T* data = a.data();
  std::vector<std::int8_t> entries(rows * cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const T x = data[i];
    if (!(x == T(-1) || x == T(0) || x == T(1)))
      throw py::value_error("entry out of alphabet at flat position " + std::to_string(i));
    entries[i] = static_cast<std::int8_t>(x);
  }
  return rsr::TernaryMatrix(rows, cols, std::move(entries));
}

rsr::TernaryMatrix to_matrix(const py::array& array) {
  if (array.ndim() != 2) throw py::value_error("expected a 2-D array, got " + std::to_string(array.ndim()) + "-D");
  const py::dtype dt = array.dtype();
  if (dt.is(py::dtype::of<std::int8_t>())) return copy_ternary<std::int8_t>(array);
  if (dt.kind() == 'f') return copy_ternary<double>(array);
  throw py::type_error("matrix dtype must be int8 or floating point");
}

std::shared_ptr<Index> preprocess(const py::array& array, const py::object& k) {
  rsr::TernaryMatrix a = to_matrix(array);
  std::size_t width = 0;
  if (py::isinstance<py::str>(k)) {
    if (k.cast<std::string>() != "auto") throw py::value_error("k must be a positive integer or \"auto\"");
    width = rsr::optimal_k(std::max<std::size_t>(a.rows(), 1), rsr::Variant::rsrpp);
  } else if (py::isinstance<py::int_>(k) && !py::isinstance<py::bool_>(k)) {
    const long long value = k.cast<long long>();
    if (value < 1) throw py::value_error("k must be a positive integer or \"auto\"");
    width = static_cast<std::size_t>(value);
  } else {
    throw py::type_error("k must be a positive integer or \"auto\"");
  }
  py::gil_scoped_release release;
  return std::make_shared<Index>(rsr::preprocess_ternary(a, width));
}

py::array_t<double> multiply(const Index& index, const py::array& vector, const std::string& variant_name) {
  const rsr::Variant variant = rsr::parse_variant(variant_name);
  if (!vector.dtype().is(py::dtype::of<double>())) throw py::type_error("vector dtype must be float64");
  if (vector.ndim() != 1) throw py::value_error("expected a 1-D vector, got " + std::to_string(vector.ndim()) + "-D");
  if (!(vector.flags() & py::array::c_style)) throw py::value_error("vector must be contiguous");
  const std::span<const double> v(static_cast<const double*>(vector.data()), static_cast<std::size_t>(vector.shape(0)));
  std::vector<double> out;
  {
    py::gil_scoped_release release;
    out = std::visit([&](const auto& i) { return rsr::multiply_parallel(v, i, variant, 1); }, index.get());
  }
  py::array_t<double> result(static_cast<py::ssize_t>(out.size()));
  std::copy(out.begin(), out.end(), result.mutable_data());
  return result;
}

py::dict space_report(const Index& index) {
  const rsr::SpaceReport r = std::visit([](const auto& i) { return rsr::space_report(i); }, index.get());
  py::dict d;
  d["index_entries"] = r.index_entries;
  d["dense_entries"] = r.dense_entries;
  d["entry_ratio"] = r.entry_ratio;
  d["serialized_bytes"] = r.serialized_bytes;
  d["dense_bytes_1B"] = r.dense_bytes_1B;
  d["byte_ratio"] = r.byte_ratio;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the rsr package";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rsr::IoError& e) {
      py::set_error(PyExc_OSError, e.what());
    } catch (const rsr::Error& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });
  // Registered last so they are tried before the translator above.
  py::register_exception<rsr::IndexError>(m, "InvalidIndexError", PyExc_ValueError);
  py::register_exception<rsr::FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<Index, std::shared_ptr<Index>>(m, "Index")
      .def_property_readonly("rows", &Index::rows)
      .def_property_readonly("cols", &Index::cols)
      .def_property_readonly("k", &Index::k)
      .def_property_readonly("kind", &Index::kind)
      .def("space_report", &space_report)
      .def("__repr__", [](const Index& i) {
        return "<rsr.Index " + i.kind() + " " + std::to_string(i.rows()) + "x" + std::to_string(i.cols()) +
               " k=" + std::to_string(i.k()) + ">";
      });

  m.def("preprocess", &preprocess, py::arg("array"), py::arg("k") = "auto");
  m.def("multiply", &multiply, py::arg("handle"), py::arg("vector"), py::arg("variant") = "rsrpp");
  m.def("save", [](const Index& index, const std::string& path) {
    std::visit([&](const auto& i) { rsr::save_index(i, path); }, index.get());
  }, py::arg("handle"), py::arg("path"));
  m.def("load", [](const std::string& path) { return std::make_shared<Index>(rsr::load_index(path)); },
        py::arg("path"));
}

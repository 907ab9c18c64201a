#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccw/cli.hpp"
#include "ccw/contact.hpp"
#include "ccw/handlecalc.hpp"
#include "ccw/models.hpp"
#include "ccw/numcheck.hpp"

namespace py = pybind11;
using namespace ccw;

namespace {

std::string check_kind(ContactCheck::Kind k) {
    switch (k) {
        case ContactCheck::Kind::ExactConstant: return "ExactConstant";
        case ContactCheck::Kind::NonvanishingSampled: return "NonvanishingSampled";
        default: return "Fails";
    }
}

py::dict witness_dict(const Witness& w) {
    py::dict d;
    d["index"] = w.index;
    d["point"] = w.point;
    d["value"] = w.value;
    return d;
}

HandleDecomposition load(const std::string& text) { return decomposition_from_json(text); }

}  // namespace

PYBIND11_MODULE(_ccw, m) {
    m.doc() = "contact handle toolkit";

    auto base = py::register_exception<Error>(m, "CcwError");
    py::register_exception<HandleMoveError>(m, "HandleMoveError", base.ptr());
    py::register_exception<cli::ParseError>(m, "ParseError", base.ptr());

    py::class_<ContactBundle>(m, "Bundle")
        .def_property_readonly("dim", [](const ContactBundle& b) { return b.chart.dim(); })
        .def_property_readonly("coordinates", [](const ContactBundle& b) {
            std::vector<std::string> out;
            for (std::size_t i = 0; i < b.chart.dim(); ++i) out.push_back(b.chart.name(i));
            return out;
        })
        .def_property_readonly("alpha", [](const ContactBundle& b) { return b.alpha.to_string(); })
        .def_property_readonly("field", [](const ContactBundle& b) -> std::optional<std::string> {
            if (!b.X) return std::nullopt;
            return b.X->to_string();
        })
        .def_property_readonly("phi", [](const ContactBundle& b) -> std::optional<std::string> {
            if (!b.phi) return std::nullopt;
            return b.phi->to_string();
        })
        .def("__repr__", [](const ContactBundle& b) { return "<Bundle alpha=" + b.alpha.to_string() + ">"; });

    m.def("darboux", [](std::size_t n) { return darboux(n).bundle; }, py::arg("n"));
    m.def("standard_convex", [](std::size_t n, std::size_t k) { return standard_convex(n, k).bundle; }, py::arg("n"),
          py::arg("k"));
    m.def("cancellation_model", [](std::size_t n, const std::string& eps) {
        return cancellation_model(n, Rational::parse(eps)).bundle;
    }, py::arg("n"), py::arg("eps"));
    m.def("sutured_collar", [](const std::string& c) { return sutured_collar(Rational::parse(c)).bundle; },
          py::arg("c"));

    m.def("check_contact", [](const ContactBundle& b, std::size_t grid) {
        ContactCheck c = check_contact(b, grid);
        py::dict d;
        d["kind"] = check_kind(c.kind);
        d["constant"] = c.constant.to_string();
        d["top"] = c.top.to_string();
        d["samples"] = c.samples;
        return d;
    }, py::arg("bundle"), py::arg("grid") = 11);
    m.def("reeb_field", [](const ContactBundle& b) { return reeb_field(b).to_string(); });
    m.def("expansion_coefficient", [](const ContactBundle& b) -> std::optional<std::string> {
        if (!b.X) throw InvalidArgument("bundle has no vector field");
        ExpansionResult r = expansion_coefficient(b, *b.X);
        if (!r.is_contact_field()) return std::nullopt;
        return r.mu.to_string();
    });
    m.def("field_to_ham", [](const ContactBundle& b) {
        if (!b.X) throw InvalidArgument("bundle has no vector field");
        return field_to_ham(b, *b.X).to_string();
    });
    m.def("round_trip_ok", [](const ContactBundle& b) {
        if (!b.X) throw InvalidArgument("bundle has no vector field");
        return ham_to_field(b, field_to_ham(b, *b.X)) == *b.X;
    });

    m.def("grad_like_scan", [](const ContactBundle& b, std::size_t grid, const std::string& mode,
                               const std::vector<std::vector<std::string>>& critical) {
        ScanSpec spec = ScanSpec::uniform(b.domain, grid, mode == "exact" ? ScanMode::Exact : ScanMode::Float);
        std::vector<PointQ> crit;
        for (const auto& p : critical) {
            std::vector<Rational> x;
            for (const auto& s : p) x.push_back(Rational::parse(s));
            crit.emplace_back(b.chart, x);
        }
        GradientLikeReport r = grad_like_scan(b, spec, crit);
        py::dict d;
        d["points"] = r.points;
        d["excluded"] = r.excluded;
        d["best_delta"] = r.best_delta;
        d["min_margin"] = r.min_margin;
        d["min_ratio"] = r.min_ratio;
        d["certified"] = r.certified();
        py::list w;
        for (const auto& x : r.witnesses) w.append(witness_dict(x));
        d["witnesses"] = w;
        return d;
    }, py::arg("bundle"), py::arg("grid") = 11, py::arg("mode") = "float",
          py::arg("critical") = std::vector<std::vector<std::string>>{});

    m.def("framing_group", [](long k, long l) { return framing_group(k, l).to_string(); });
    m.def("validate_handles", [](const std::string& text) {
        ValidationReport r = validate(load(text));
        py::list f;
        for (const auto& x : r.findings) f.append(py::make_tuple(x.code, x.detail));
        py::dict d;
        d["valid"] = r.valid();
        d["euler"] = r.euler;
        d["findings"] = f;
        return d;
    });
    m.def("rearrange_split", [](const std::string& text) {
        return decomposition_to_json(rearrange_split(load(text)).decomposition);
    });
    m.def("cancel_pair", [](const std::string& text, std::size_t i, std::size_t j) {
        return decomposition_to_json(cancel_pair(load(text), i, j));
    });
    m.def("dualize", [](const std::string& text) { return decomposition_to_json(dualize(load(text))); });
    m.def("to_open_book", [](const std::string& text) { return open_book_to_json(to_open_book(load(text))); });
    m.def("from_open_book", [](const std::string& text, long n) {
        return decomposition_to_json(from_open_book(open_book_from_json(text), n));
    });

    m.def("run_session", [](const std::string& text, bool timing, std::uint64_t seed, const std::string& base_dir) {
        cli::Session s = cli::parse_session(text, base_dir);
        cli::ExecOptions o;
        o.seed = seed;
        cli::ExecResult r = cli::execute(s, o);
        return py::make_tuple(r.exit_code, cli::emit_report(r.reports, cli::Format::Json, timing));
    }, py::arg("text"), py::arg("timing") = false, py::arg("seed") = 0, py::arg("base_dir") = "");
    m.def("print_session", [](const std::string& text) { return cli::print_session(cli::parse_session(text)); });
}

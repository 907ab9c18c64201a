#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccw/cli.hpp"

namespace {

int fail_with(int code, const std::string& where, const std::string& msg) {
    std::cerr << "ccw: " << where << msg << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contact convexity workbench: runs a session of DSL statements and checks."};
    std::string file;
    std::string inline_text;
    bool json_out = false, no_timing = false, print_only = false;
    std::string box, grid, mode;
    std::uint64_t seed = 0;
    app.add_option("file", file, "Session file ('-' or omitted reads stdin)");
    app.add_option("-e,--execute", inline_text, "Session text given inline");
    app.add_flag("--json", json_out, "Emit the JSON report list");
    app.add_flag("--no-timing", no_timing, "Leave out timing fields");
    app.add_flag("--print", print_only, "Print the canonical session instead of running it");
    app.add_option("--box", box, "Default box, e.g. -1..1 or -1..1,0..2,...");
    app.add_option("--grid", grid, "Default grid counts, e.g. 11 or 5,5,21");
    app.add_option("--mode", mode, "Default arithmetic mode")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--seed", seed, "Seed for sampled checks");
    app.set_version_flag("--version", "ccw 0.1.0");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string text, where;
    std::filesystem::path base = std::filesystem::current_path();
    if (app.count("--execute") > 0) {
        text = inline_text;
        where = "<inline>:";
    } else if (file.empty() || file == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
        where = "<stdin>:";
    } else {
        std::ifstream in(file, std::ios::binary);
        if (!in) return fail_with(3, "", "cannot read " + file);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        where = file + ":";
        base = std::filesystem::absolute(file).parent_path();
    }

    ccw::cli::Session session;
    try {
        session = ccw::cli::parse_session(text, base);
    } catch (const ccw::cli::ParseError& e) {
        return fail_with(2, where + " ", std::string("parse error: ") + e.what());
    } catch (const std::exception& e) {
        return fail_with(3, where + " ", e.what());
    }
    if (print_only) {
        std::cout << ccw::cli::print_session(session);
        return 0;
    }

    ccw::cli::ExecOptions opts;
    if (!box.empty()) opts.box = box;
    if (!grid.empty()) opts.grid = grid;
    if (!mode.empty()) opts.mode = mode;
    opts.seed = seed;
    ccw::cli::ExecResult r = ccw::cli::execute(session, opts);
    std::cout << ccw::cli::emit_report(r.reports, json_out ? ccw::cli::Format::Json : ccw::cli::Format::Text, !no_timing);
    if (!r.error.empty()) std::cerr << "ccw: " << where << " " << r.error << "\n";
    return r.exit_code;
}

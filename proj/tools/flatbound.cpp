#include <iostream>

#include "CLI11.hpp"
#include "flatbound/cli.hpp"

int main(int argc, char** argv) {
    flatbound::Request req;
    CLI::App app{"Flat-based lower bounds on convex surrogate dimension"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--target", req.target, "loss or cells document (path or bundled name, NAME#key for a bundle entry)");
        sub->add_option("--cells", req.cells, "cells document");
    };

    auto* analyze = app.add_subcommand("analyze", "cells and Bayes risk summary of a target");
    add_common(analyze);

    auto* bound = app.add_subcommand("bound", "flat and feasible-subspace lower bounds at (p, r)");
    add_common(bound);
    bound->add_option("--p", req.p, "distribution as comma-separated rationals")->required();
    bound->add_option("--r", req.r, "report whose cell contains p")->required();

    auto* elicitable = app.add_subcommand("elicitable", "search for a loss eliciting the cells");
    add_common(elicitable);

    auto* flat = app.add_subcommand("flat", "certify a flat and evaluate the Bayes risk bound");
    add_common(flat);
    flat->add_option("--flat", req.flat, "flat document")->required();
    flat->add_option("--p", req.p, "point on the flat (default: vertex centroid)");
    flat->add_option("--r", req.r, "report whose cell should contain the flat");

    auto* indirect = app.add_subcommand("indirect", "check that a surrogate and link indirectly elicit a target");
    add_common(indirect);
    indirect->add_option("--surrogate", req.surrogate, "surrogate document")->required();
    indirect->add_option("--link", req.link, "link document")->required();
    indirect->add_option("--probe-budget", req.probe_budget, "probe cap for sampled checks")->capture_default_str();

    auto* render = app.add_subcommand("render", "SVG diagram of a 3-outcome target");
    add_common(render);
    render->add_option("--out", req.out, "SVG output path")->required();
    render->add_option("--mark", req.marks, "annotation LABEL=p1,p2,p3 (repeatable)");
    render->add_option("--flat", req.flat, "flat document to draw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    req.command = app.get_subcommands().front()->get_name();
    const auto res = flatbound::run(req);
    std::cout << res.output;
    std::cerr << res.error;
    return res.exit_code;
}

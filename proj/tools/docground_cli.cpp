// Command line front end. Everything goes through the shared library's C
// interface; exit codes: 0 ok, 1 failed run, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "docground.h"

namespace {

const char* nz(const std::string& s) {
    return s.empty() ? nullptr : s.c_str();
}

int finish(dg_status st, char* payload, bool quiet) {
    if (st != DG_OK) {
        std::fprintf(stderr, "error: %s\n", dg_last_error());
        dg_string_free(payload);
        return 1;
    }
    if (payload) {
        if (!quiet) std::fputs(payload, stdout);
        dg_string_free(payload);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grounded document dataset toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dg_version()));

    int exit_code = 0;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress stdout payloads");

    // render-synthetic
    auto* render = app.add_subcommand("render-synthetic", "render a scene to png, or generate a random scene");
    std::string r_scene, r_out;
    std::uint64_t r_seed = 0;
    int r_width = 320, r_height = 200, r_layers = 6;
    bool r_random = false;
    render->add_option("--scene", r_scene, "scene json to render");
    render->add_flag("--random", r_random, "generate a random non-overlapping scene instead");
    render->add_option("--seed", r_seed, "rng seed for --random");
    render->add_option("--width", r_width, "canvas width for --random");
    render->add_option("--height", r_height, "canvas height for --random");
    render->add_option("--layers", r_layers, "layer count for --random");
    render->add_option("--out", r_out, "output file (png, or scene json for --random)");
    render->callback([&] {
        if (r_random) {
            char* payload = nullptr;
            dg_status st = dg_cmd_generate_scene(r_seed, r_width, r_height, r_layers, nz(r_out), &payload);
            exit_code = finish(st, payload, quiet);
            return;
        }
        if (r_scene.empty() || r_out.empty()) {
            std::fprintf(stderr, "error: --scene and --out are required unless --random is given\n");
            exit_code = 2;
            return;
        }
        exit_code = finish(dg_cmd_render_scene(r_scene.c_str(), r_out.c_str()), nullptr, quiet);
    });

    // extract-boxes
    auto* extract = app.add_subcommand("extract-boxes", "recover per-layer boxes by re-rendering, or diff two pngs");
    std::string e_scene, e_base, e_variant, e_out;
    std::string e_toggle = "opacity";
    int e_tol = -1;
    extract->add_option("--scene", e_scene, "scene json: toggle every layer and report all boxes");
    extract->add_option("--base", e_base, "baseline png (with --variant)");
    extract->add_option("--variant", e_variant, "modified png to diff against --base");
    extract->add_option("--tol", e_tol, "per-channel tolerance (default 0 for --scene, 2 for image pairs)")
        ->check(CLI::NonNegativeNumber);
    extract->add_option("--toggle", e_toggle, "how --scene probes a layer: opacity or color")
        ->check(CLI::IsMember({"opacity", "color"}));
    extract->add_option("--out", e_out, "output json (stdout when omitted)");
    extract->callback([&] {
        char* payload = nullptr;
        dg_status st;
        if (!e_scene.empty()) {
            int tol = e_tol < 0 ? 0 : e_tol;
            st = dg_cmd_extract_boxes(e_scene.c_str(), tol, e_toggle.c_str(), nz(e_out), &payload);
        } else if (!e_base.empty() && !e_variant.empty()) {
            int tol = e_tol < 0 ? 2 : e_tol;
            st = dg_cmd_diff_box(e_base.c_str(), e_variant.c_str(), tol, nz(e_out), &payload);
        } else {
            std::fprintf(stderr, "error: pass --scene, or --base and --variant\n");
            exit_code = 2;
            return;
        }
        exit_code = finish(st, payload, quiet || !e_out.empty());
    });

    // merge-layout
    auto* merge = app.add_subcommand("merge-layout", "merge ordered and unordered block lists into reading order");
    std::string m_ordered, m_unordered, m_config, m_out;
    merge->add_option("--ordered", m_ordered, "ordered blocks jsonl")->required();
    merge->add_option("--unordered", m_unordered, "unordered blocks jsonl")->required();
    merge->add_option("--config", m_config, "merge thresholds json");
    merge->add_option("--out", m_out, "merged blocks jsonl (stdout when omitted)");
    merge->callback([&] {
        char* payload = nullptr;
        dg_status st = dg_cmd_merge_layout(m_ordered.c_str(), m_unordered.c_str(), nz(m_config), nz(m_out), &payload);
        exit_code = finish(st, payload, quiet);
    });

    // gen-parsing-tasks
    auto* gen = app.add_subcommand("gen-parsing-tasks", "emit parsing records from annotated pages");
    std::string g_pages, g_granularity, g_templates, g_out;
    gen->add_option("--pages", g_pages, "pages jsonl")->required();
    gen->add_option("--granularity", g_granularity, "word|phrase|line|paragraph|full_page")->required();
    gen->add_option("--templates", g_templates, "instruction templates json")->required();
    gen->add_option("--out", g_out, "records jsonl (stdout when omitted)");
    gen->callback([&] {
        char* payload = nullptr;
        dg_status st =
            dg_cmd_gen_parsing_tasks(g_pages.c_str(), g_granularity.c_str(), g_templates.c_str(), nz(g_out), &payload);
        exit_code = finish(st, payload, quiet);
    });

    // post-annotate
    auto* post = app.add_subcommand("post-annotate", "ground generated qa text against page annotations");
    std::string p_generated, p_pages, p_templates, p_out = "samples.jsonl", p_stats;
    std::uint64_t p_seed = 0;
    post->add_option("--generated", p_generated, "generated qa jsonl")->required();
    post->add_option("--pages", p_pages, "pages jsonl")->required();
    post->add_option("--templates", p_templates, "format prompt templates json")->required();
    post->add_option("--seed", p_seed, "seed for format prompt selection");
    post->add_option("--out", p_out, "samples jsonl");
    post->add_option("--stats", p_stats, "annotation stats json");
    post->callback([&] {
        char* payload = nullptr;
        dg_status st = dg_cmd_post_annotate(p_generated.c_str(), p_pages.c_str(), p_templates.c_str(), p_seed,
                                            p_out.c_str(), nz(p_stats), &payload);
        exit_code = finish(st, payload, quiet);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "split samples into accepted and rejected");
    std::string v_samples, v_pages, v_accepted = "accepted.jsonl", v_rejected = "rejected.jsonl";
    bool v_strict_pdf = false;
    verify->add_option("--samples", v_samples, "samples jsonl")->required();
    verify->add_option("--pages", v_pages, "pages jsonl (enables content checks)");
    verify->add_flag("--strict-pdf", v_strict_pdf, "content-check pdf samples too");
    verify->add_option("--accepted", v_accepted, "accepted samples jsonl");
    verify->add_option("--rejected", v_rejected, "rejected samples jsonl");
    verify->callback([&] {
        char* payload = nullptr;
        dg_status st = dg_cmd_verify(v_samples.c_str(), nz(v_pages), v_strict_pdf ? 1 : 0, v_accepted.c_str(),
                                     v_rejected.c_str(), &payload);
        exit_code = finish(st, payload, quiet);
    });

    // classify
    auto* classify = app.add_subcommand("classify", "fill in the task field from question grounding and answer class");
    std::string c_samples, c_out;
    classify->add_option("--samples", c_samples, "samples jsonl")->required();
    classify->add_option("--out", c_out, "classified samples jsonl (stdout when omitted)");
    classify->callback([&] {
        char* payload = nullptr;
        dg_status st = dg_cmd_classify(c_samples.c_str(), nz(c_out), &payload);
        exit_code = finish(st, payload, quiet);
    });

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "score predictions against ground truth");
    std::string ev_pred, ev_gt, ev_sweep, ev_report;
    double ev_iou = 0.5;
    eval->add_option("--pred", ev_pred, "predictions jsonl")->required();
    eval->add_option("--gt", ev_gt, "ground truth samples jsonl")->required();
    eval->add_option("--iou", ev_iou, "span match iou threshold");
    eval->add_option("--sweep", ev_sweep, "comma separated extra thresholds");
    eval->add_option("--report", ev_report, "score report json");
    eval->callback([&] {
        char* table = nullptr;
        dg_status st = dg_cmd_evaluate(ev_pred.c_str(), ev_gt.c_str(), ev_iou, nz(ev_sweep), nz(ev_report), &table);
        exit_code = finish(st, table, quiet);
    });

    // sweep: evaluate with a mandatory threshold list
    auto* sweep = app.add_subcommand("sweep", "f1 across a list of iou thresholds");
    std::string s_pred, s_gt, s_thresholds, s_report;
    sweep->add_option("--pred", s_pred, "predictions jsonl")->required();
    sweep->add_option("--gt", s_gt, "ground truth samples jsonl")->required();
    sweep->add_option("--thresholds", s_thresholds, "comma separated iou thresholds")->required();
    sweep->add_option("--report", s_report, "score report json");
    sweep->callback([&] {
        char* table = nullptr;
        dg_status st = dg_cmd_evaluate(s_pred.c_str(), s_gt.c_str(), 0.5, s_thresholds.c_str(), nz(s_report), &table);
        exit_code = finish(st, table, quiet);
    });

    // report
    auto* report = app.add_subcommand("report", "summary statistics for a corpus");
    std::string rp_corpus, rp_out;
    report->add_option("--corpus", rp_corpus, "corpus jsonl")->required();
    report->add_option("--out", rp_out, "stats json");
    report->callback([&] {
        char* table = nullptr;
        dg_status st = dg_cmd_report(rp_corpus.c_str(), nz(rp_out), &table);
        exit_code = finish(st, table, quiet);
    });

    // Let --quiet appear after the subcommand too.
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    return exit_code;
}

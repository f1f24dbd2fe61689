#pragma once

#include <optional>
#include <string_view>

namespace docground {

enum class DocType { Poster, Chart, Pdf };

// What the answer is made of: grounded answer text, grounded reasoning with a
// final short answer, grounded long-form output, or plain text.
enum class AnswerClass { GA, GR, GO, PA };

// Question axis x answer axis. Questions with at least one box are grounded
// questions; the rest are plain. PlainQA is the degenerate cell: no boxes on
// either side.
enum class TaskKind { Ga, Gr, Go, Rt, GRa, GRr, GRo, PlainQA };

constexpr TaskKind task_for(bool grounded_question, AnswerClass cls) {
    if (grounded_question) {
        switch (cls) {
            case AnswerClass::GA: return TaskKind::GRa;
            case AnswerClass::GR: return TaskKind::GRr;
            case AnswerClass::GO: return TaskKind::GRo;
            case AnswerClass::PA: return TaskKind::Rt;
        }
    }
    switch (cls) {
        case AnswerClass::GA: return TaskKind::Ga;
        case AnswerClass::GR: return TaskKind::Gr;
        case AnswerClass::GO: return TaskKind::Go;
        case AnswerClass::PA: return TaskKind::PlainQA;
    }
    return TaskKind::PlainQA;
}

constexpr AnswerClass answer_class_of(TaskKind t) {
    switch (t) {
        case TaskKind::Ga:
        case TaskKind::GRa: return AnswerClass::GA;
        case TaskKind::Gr:
        case TaskKind::GRr: return AnswerClass::GR;
        case TaskKind::Go:
        case TaskKind::GRo: return AnswerClass::GO;
        case TaskKind::Rt:
        case TaskKind::PlainQA: return AnswerClass::PA;
    }
    return AnswerClass::PA;
}

// Exact match over the normalized stripped answer. BLEU for long-form output.
constexpr bool task_scores_accuracy(TaskKind t) {
    return t != TaskKind::Go && t != TaskKind::GRo;
}
constexpr bool task_scores_bleu(TaskKind t) {
    return t == TaskKind::Go || t == TaskKind::GRo;
}
// Grounded-answer tasks contribute to span matching.
constexpr bool task_scores_f1(TaskKind t) {
    return t != TaskKind::Rt && t != TaskKind::PlainQA;
}

constexpr const char* task_name(TaskKind t) {
    switch (t) {
        case TaskKind::Ga: return "Ga";
        case TaskKind::Gr: return "Gr";
        case TaskKind::Go: return "Go";
        case TaskKind::Rt: return "Rt";
        case TaskKind::GRa: return "GRa";
        case TaskKind::GRr: return "GRr";
        case TaskKind::GRo: return "GRo";
        case TaskKind::PlainQA: return "PlainQA";
    }
    return "PlainQA";
}

constexpr const char* answer_class_name(AnswerClass c) {
    switch (c) {
        case AnswerClass::GA: return "GA";
        case AnswerClass::GR: return "GR";
        case AnswerClass::GO: return "GO";
        case AnswerClass::PA: return "PA";
    }
    return "PA";
}

constexpr const char* doc_type_name(DocType d) {
    switch (d) {
        case DocType::Poster: return "poster";
        case DocType::Chart: return "chart";
        case DocType::Pdf: return "pdf";
    }
    return "pdf";
}

inline std::optional<TaskKind> task_from_name(std::string_view s) {
    for (TaskKind t : {TaskKind::Ga, TaskKind::Gr, TaskKind::Go, TaskKind::Rt, TaskKind::GRa,
                       TaskKind::GRr, TaskKind::GRo, TaskKind::PlainQA}) {
        if (s == task_name(t)) return t;
    }
    return std::nullopt;
}

inline std::optional<AnswerClass> answer_class_from_name(std::string_view s) {
    for (AnswerClass c : {AnswerClass::GA, AnswerClass::GR, AnswerClass::GO, AnswerClass::PA}) {
        if (s == answer_class_name(c)) return c;
    }
    return std::nullopt;
}

inline std::optional<DocType> doc_type_from_name(std::string_view s) {
    for (DocType d : {DocType::Poster, DocType::Chart, DocType::Pdf}) {
        if (s == doc_type_name(d)) return d;
    }
    return std::nullopt;
}

} // namespace docground

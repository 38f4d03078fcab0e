#include <fstream>
#include <set>

#include "evifuse/errors.hpp"
#include "evifuse/knowledge_base.hpp"
#include "json.hpp"

namespace evifuse {

using nlohmann::json;

KnowledgeBase kb_load(const std::string& path, const FramePtr& frame) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open knowledge base '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ParseError("knowledge base '" + path + "': " + ex.what());
    }

    try {
        if (doc.value("version", "") != kKnowledgeBaseMagic)
            throw ParseError("knowledge base '" + path + "': version must be '" +
                             std::string(kKnowledgeBaseMagic) + "'");

        KnowledgeBase kb;
        std::set<int> seen;
        std::size_t i = 0;
        for (const json& jt : doc.at("tuples")) {
            const std::string tag = "tuples[" + std::to_string(i) + "]";
            KnowledgeTuple tuple;
            tuple.process = jt.at("process").get<std::string>();
            tuple.subprocess = jt.at("subprocess").get<std::string>();
            tuple.failure_mode = jt.at("failure_mode").get<std::string>();
            tuple.causes = jt.value("causes", std::vector<std::string>{});
            tuple.effects = jt.value("effects", std::vector<std::string>{});
            tuple.recommendations = jt.value("recommendations", std::vector<std::string>{});
            tuple.rule_label = jt.at("label").get<int>();
            tuple.weight = jt.value("weight", 1.0);

            if (!frame->contains(tuple.rule_label))
                throw UnknownLabelError(tag + ": label " + std::to_string(tuple.rule_label) +
                                        " is not in the frame");
            if (!seen.insert(tuple.rule_label).second)
                throw DuplicateTupleError(tag + ": label " + std::to_string(tuple.rule_label) +
                                          " appears twice");
            kb.push_back(std::move(tuple));
            ++i;
        }
        return kb;
    } catch (const json::exception& ex) {
        throw ParseError("knowledge base '" + path + "': " + ex.what());
    }
}

std::string kb_to_json(const KnowledgeBase& kb) {
    json doc;
    doc["version"] = kKnowledgeBaseMagic;
    doc["tuples"] = json::array();
    for (const KnowledgeTuple& t : kb) {
        json jt;
        jt["process"] = t.process;
        jt["subprocess"] = t.subprocess;
        jt["failure_mode"] = t.failure_mode;
        jt["causes"] = t.causes;
        jt["effects"] = t.effects;
        jt["recommendations"] = t.recommendations;
        jt["label"] = t.rule_label;
        jt["weight"] = t.weight;
        doc["tuples"].push_back(std::move(jt));
    }
    return doc.dump(2) + "\n";
}

std::optional<KnowledgeTuple> match_assessment(const KnowledgeBase& kb, int y_sys) {
    for (const KnowledgeTuple& t : kb)
        if (t.rule_label == y_sys) return t;
    return std::nullopt;
}

}  // namespace evifuse

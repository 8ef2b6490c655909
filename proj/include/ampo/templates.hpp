#pragma once

#include <map>
#include <string>

namespace ampo {

enum class AgentRole { analyzer, summarizer, revisor, initializer };

const char* to_string(AgentRole role);

struct MetaPromptTemplate {
    AgentRole role = AgentRole::analyzer;
    std::string body;
};

// Byte-exact placeholder substitution: every {{key}} in the body must be a
// key of the context. Throws MissingPlaceholder naming the first absent key.
std::string render(const MetaPromptTemplate& tmpl,
                   const std::map<std::string, std::string>& context);

// The four meta-prompt bodies. They are the method's working parts and ship
// as editable text assets (analyzer.txt, summarizer.txt, revisor.txt,
// initializer.txt); any of them can be overridden per run.
struct TemplateSet {
    MetaPromptTemplate analyzer;
    MetaPromptTemplate summarizer;
    MetaPromptTemplate revisor;
    MetaPromptTemplate initializer;

    static const TemplateSet& defaults();

    // Loads any of the four files found under dir, keeping defaults for the
    // rest. Throws ConfigError if dir does not exist.
    static TemplateSet load_dir(const std::string& dir);

    const MetaPromptTemplate& get(AgentRole role) const;
};

}  // namespace ampo

#include "ampo/templates.hpp"

#include "ampo/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ampo {

namespace fs = std::filesystem;

const char* to_string(AgentRole role) {
    switch (role) {
        case AgentRole::analyzer: return "analyzer";
        case AgentRole::summarizer: return "summarizer";
        case AgentRole::revisor: return "revisor";
        case AgentRole::initializer: return "initializer";
    }
    return "analyzer";
}

std::string render(const MetaPromptTemplate& tmpl,
                   const std::map<std::string, std::string>& context) {
    const std::string& body = tmpl.body;
    std::string out;
    out.reserve(body.size());
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t open = body.find("{{", pos);
        if (open == std::string::npos) {
            out.append(body, pos, body.size() - pos);
            break;
        }
        const std::size_t close = body.find("}}", open + 2);
        if (close == std::string::npos) {
            out.append(body, pos, body.size() - pos);
            break;
        }
        out.append(body, pos, open - pos);
        const std::string key = body.substr(open + 2, close - open - 2);
        const auto found = context.find(key);
        if (found == context.end()) throw MissingPlaceholder(key);
        out += found->second;
        pos = close + 2;
    }
    return out;
}

namespace {

constexpr const char* kAnalyzerBody =
    R"TPL(---ProblemStart---
I have some instructions for a specific problem:
---InstructionsStart---
{{initial_prompt}}
---InstructionsEnd---

But it gets the following cases wrong:
---BadCasesStart---
{{bad_examples}}
---BadCasesEnd---

Your task is to identify the underlying causes for my [# Instructions] as an analyzer. Please follow these steps:
(1) Identify what perspectives there are to consider for my problem. Please think as comprehensively as possible, considering all aspects.
(2) Based on these potential perspectives you identified, analyze the pattern of the failed cases.
(3) Carefully review each step of my [# Instructions] and identify which step neglects the key information in the pattern, resulting in failure.
(4) Write your reasons and wrap each reason with <START> and <END>.
)TPL";

constexpr const char* kSummarizerBody =
    R"TPL(---ProblemStart---
I have some instructions for a specific problem:
---InstructionsStart---
{{initial_prompt}}
---InstructionsEnd---

Here are some reasons why my current instructions cannot solve some problem :
---Reasons---
{{Reasons}}
---Reasons---

Your task is to summarize the many reasons provided above into a few major categories and assign an important score for each category. Be careful to eliminate repetitive and similar reasons. Each summarized pattern should be wrapped with <START> and <END>.
)TPL";

constexpr const char* kRevisorBody =
    R"TPL(---ProblemStart---
You have some instructions for a specific task:
---InstructionsStart---
{{initial_prompt}}
---InstructionsEnd---

However, due to the complexity of real-world situations, a single flow of instructions (i.e., sequential instructions) cannot apply to all cases. Therefore, you should transform the instructions into a conditional approach, which means adopting different instructions for different patterns.

Notably, the key aspect of this process is to create an adaptive prompt structure, thereby accommodating tasks of varying difficulties. To achieve this, you should find the golden mean between adding the branches to address the new pattern and providing more details to enhance the existing branches based on the difficulty of your task and the distribution of recognized patterns.

An expert has pointed some patterns that you don't considered before for your instructions:
---ExpertAnalysisStart---
{{patterns}}
---ExpertAnalysisEnd---

Please optimize your [# Instructions] based on expert analysis step-by-step:
(1) Carefully review each step of your instructions.

(2) Identify the steps that went wrong due to a lack of key information mentioned in expert analysis.

(3) For each suboptimal step, you have the following options:
- 3.1 Consider improving the step to include the key information.
- 3.2 Otherwise, you can also consider adding **sub-steps** using an **if** or **if-else** structure to handle the **new** patterns. Ensure that each substep is specific and avoids vague instructions.
Note that if a step needs to consider multiple situations, break it down into substeps to make it easier to follow.

(4) Include Tips or Cautions: If merely optimizing existing steps with branches like if-else does not sufficiently to address all aspects, add new tips or cautions to the current instructions to handle different patterns.

(5) Maintain the other main steps unchanged from the initial prompt, in order to not lose information.

(6) At last, review the whole steps and prune the branches to avoid the instructions overfitting.

Please only output the optimized prompt without anything else.
)TPL";

constexpr const char* kInitializerBody =
    R"TPL(---ProblemStart---
I need an instruction prompt for the following task:
---TaskStart---
{{task_description}}
---TaskEnd---

Here are some input-output examples drawn from the task:
---ExamplesStart---
{{examples}}
---ExamplesEnd---

Your task is to write a clear instruction prompt that tells a model how to solve this task for new inputs. Describe the task, the expected answer format, and any rules the examples imply. Please only output the instruction prompt without anything else.
)TPL";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

const TemplateSet& TemplateSet::defaults() {
    static const TemplateSet set{
        {AgentRole::analyzer, kAnalyzerBody},
        {AgentRole::summarizer, kSummarizerBody},
        {AgentRole::revisor, kRevisorBody},
        {AgentRole::initializer, kInitializerBody},
    };
    return set;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("templates directory not found: " + dir);
    TemplateSet set = defaults();
    struct Slot {
        const char* file;
        MetaPromptTemplate* target;
    };
    const Slot slots[] = {
        {"analyzer.txt", &set.analyzer},
        {"summarizer.txt", &set.summarizer},
        {"revisor.txt", &set.revisor},
        {"initializer.txt", &set.initializer},
    };
    for (const Slot& slot : slots) {
        const fs::path path = fs::path(dir) / slot.file;
        if (fs::exists(path)) slot.target->body = read_file(path);
    }
    return set;
}

const MetaPromptTemplate& TemplateSet::get(AgentRole role) const {
    switch (role) {
        case AgentRole::analyzer: return analyzer;
        case AgentRole::summarizer: return summarizer;
        case AgentRole::revisor: return revisor;
        case AgentRole::initializer: return initializer;
    }
    return analyzer;
}

}  // namespace ampo

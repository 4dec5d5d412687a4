// Copyright 2026 The TraceSpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llm/templates_data.hpp"

namespace tracespec::llm::detail {

const TemplateText kTaskTemplates[kTaskTemplateCount] = {
    {"ar_decomposition",
     R"TPL(You are an expert in Lean 4 formal verification. Your task is to analyze
programming problems and identify the key requirements that a correct Lean 4
implementation must satisfy.

Requirements fall into two categories:
- **Preconditions**: Constraints on the input that must be true before the
function executes (e.g., "the list must not be empty", "n must be positive")
- **Postconditions**: Properties that the output must satisfy after the
function executes (e.g., "the result is the sum of all elements", "the
returned list is sorted")

Each requirement should be atomic, precise, and independently verifiable as
a Lean 4 proposition.)TPL",
     R"TPL(Analyze the following programming problem and identify all the requirements
(preconditions and postconditions) that a correct implementation must
satisfy.

## Problem Description
{problem_description}

## Function Signature
{signature}

Please identify all preconditions (input constraints) and postconditions
(output properties) for this problem. For each requirement, provide:
- A unique identifier (e.g., "R1", "R2")
- Whether it's a "precondition" or "postcondition"
- A clear description of the requirement)TPL",
     R"TPL(I've analyzed the problem and identified {ir_count} requirements
({precond_count} preconditions and {postcond_count} postconditions).

```json
{requirements_json}
```)TPL"},
    {"direct_specgen",
     R"TPL(Your input fields are:
1. `task_description` (str): The specification task
2. `task_template` (str): Lean 4 code snippet with placeholders
3. `precond_desc` (str): Natural language precondition description
4. `postcond_desc` (str): Natural language postcondition description
Your output fields are:
1. `imports` (str): Required imports (optional)
2. `precond_aux` (str): Auxiliary precondition definitions
3. `precond` (str): Generated precondition code
4. `postcond_aux` (str): Auxiliary postcondition definitions
5. `postcond` (str): Generated postcondition code
All interactions will be structured in the following way, with the
appropriate values filled in.

[[ ## task_description ## ]]
{task_description}
[[ ## task_template ## ]]
{task_template}
[[ ## precond_desc ## ]]
{precond_desc}
[[ ## postcond_desc ## ]]
{postcond_desc}
[[ ## imports ## ]]
{imports}
[[ ## precond_aux ## ]]
{precond_aux}
[[ ## precond ## ]]
{precond}
[[ ## postcond_aux ## ]]
{postcond_aux}
[[ ## postcond ## ]]
{postcond}
[[ ## completed ## ]]

In adhering to this structure, your objective is:
        You are an expert in Lean 4 programming and theorem proving.
        Please generate a Lean 4 specification that constrains the program
implementation using the template provided in `task_template`.
        The `task_template` is a Lean 4 code snippet that contains
placeholders (wrapped with {{}}) for the spec to be generated.
        The precondition should be as permissive as possible, and the
postcondition should model a sound and complete relationship between input
and output of the program based on the `task_description`.
        The generated specification should:
        - Be well-documented with comments if necessary
        - Follow Lean 4 best practices and use appropriate Lean 4 syntax and
features
        - DO NOT use Lean 3 syntax or features
        - DO NOT import Std or Init
        - Only use `precond_aux` or `postcond_aux` when you cannot express
the precondition or postcondition in the main body of the specification
        - add @[reducible, simp] attribute to the definitions in
`precond_aux` or `postcond_aux`
        Hint:
        - Use a[i]! instead of a[i] when a is an array or a list when
necessary)TPL",
     R"TPL([[ ## task_description ## ]]
{task_description}

[[ ## task_template ## ]]
{task_template}

[[ ## precond_desc ## ]]
{precond_desc}

[[ ## postcond_desc ## ]]
{postcond_desc}

Respond with the corresponding output fields, starting with the field `[[ ##
imports ## ]]`, then `[[ ## precond_aux ## ]]`, then `[[ ## precond ## ]]`,
then `[[ ## postcond_aux ## ]]`, then `[[ ## postcond ## ]]`, and then
ending with the marker for `[[ ## completed ## ]]`.)TPL",
     R"TPL([[ ## imports ## ]]
{imports}

[[ ## precond_aux ## ]]
{precond_aux}

[[ ## precond ## ]]
{precond}

[[ ## postcond_aux ## ]]
{postcond_aux}

[[ ## postcond ## ]]
{postcond}

[[ ## completed ## ]])TPL"},
    {"spec_refinement",
     R"TPL(You are a formal verification expert. Your task is to fix a Lean 4
specification based on the provided feedback.

The feedback describes issues found during evaluation:
- Syntax or type errors from Lean compilation
- Test case failures with specific conditions
- Logic errors in preconditions or postconditions

Generate a corrected specification that addresses all the feedback.)TPL",
     R"TPL(Fix this Lean 4 specification based on the feedback.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

## Current (Failed) Specification
```lean
{failed_spec}
```

## Feedback
{feedback}

Generate a corrected Lean 4 specification with both precondition and
postcondition functions.)TPL",
     R"TPL(Based on the feedback, I'll fix the specification to address the issues.

```lean
{corrected_spec}
```)TPL"},
    {"feedback_generation",
     R"TPL(You are a formal verification expert. Your task is to analyze a failed Lean
4 specification and generate detailed feedback explaining what's wrong and
how to fix it.

Your feedback should:
- Identify the root cause of failures
- Point to specific issues in preconditions or postconditions
- Suggest concrete fixes
- Be actionable and specific)TPL",
     R"TPL(Analyze this failed specification and generate feedback for improvement.

## Problem Description
{problem_description}

## Requirements
{requirements_json}

## Failed Specification
```lean
{failed_spec}
```

## Quality Score
{quality_score:.2f}

## Task
Generate detailed feedback explaining what's wrong and how to fix it.)TPL",
     R"TPL([Generated from checkpoint data as described above])TPL"},
    {"signature_generation",
     R"TPL(You are a Lean 4 programming expert. Your task is to generate a function
signature in JSON format based on the problem description.

The signature should include:
- function_name: A descriptive name for the function
- input_params: A list of input parameters, each with a name and Lean 4 type
- output_type: The Lean 4 return type of the function)TPL",
     R"TPL(Generate a Lean 4 function signature for the following problem.

## Problem Description
{problem_description}

Output the signature as a JSON object with fields:
- function_name: string
- input_params: array of objects with "name" and "type" fields
- output_type: string)TPL",
     R"TPL(Based on the problem description, I'll create a Lean 4 function signature.

The function `{func_name}` takes {num_params} parameter(s) and returns
`{output_type}`.

```json
{signature_json}
```)TPL"},
    {"positive_test_gen",
     R"TPL(You are an expert in Lean 4 software testing. Your task is to generate test
cases for programming problems that will be implemented in Lean 4.

**Positive test cases** are tests with valid inputs that satisfy all input
constraints (preconditions), paired with the correct expected output. These
tests verify that a correct Lean 4 implementation produces the right results
for valid inputs.)TPL",
     R"TPL(Generate positive test cases for the following problem. These should be
valid inputs with correct expected outputs.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

Please generate test cases that cover different scenarios and edge cases.
For each test case, provide:
- The input values
- The expected output
- A brief description of what the test validates)TPL",
     R"TPL(I'll generate {test_count} positive test cases covering different scenarios
for this problem.

```json
{testcases_json}
```)TPL"},
    {"negative_input_test_gen",
     R"TPL(You are an expert in Lean 4 software testing. Your task is to generate test
cases for programming problems that will be implemented in Lean 4.

**Negative input test cases** are tests with invalid inputs that violate the
input constraints (preconditions). For example, if a function requires a
non-empty list, a negative input test would pass an empty list. These tests
help verify that a Lean 4 specification correctly identifies invalid inputs.)TPL",
     R"TPL(Generate negative input test cases for the following problem. These should
have invalid inputs that violate the input constraints.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

Please generate test cases with invalid inputs that violate the
preconditions (input constraints). For each test case, provide:
- The invalid input values
- A description of which constraint is violated and why)TPL",
     R"TPL(I'll generate {test_count} negative input test cases that violate the input
constraints.

```json
{testcases_json}
```)TPL"},
    {"negative_output_test_gen",
     R"TPL(You are an expert in Lean 4 software testing. Your task is to generate test
cases for programming problems that will be implemented in Lean 4.

**Negative output test cases** are tests with valid inputs but intentionally
wrong outputs that violate the expected behavior (postconditions). For
example, if the correct output for input [1,2,3] is 6 (the sum), a negative
output test might use output 5 (incorrect sum). These tests help verify that
a Lean 4 specification correctly identifies wrong outputs.)TPL",
     R"TPL(Generate negative output test cases for the following problem. These should
have valid inputs but intentionally wrong outputs.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

## Reference Test Cases (with correct outputs)
{positive_tests_json}

Please generate test cases by taking valid inputs and pairing them with
wrong outputs. For each test case, provide:
- The input values (valid inputs)
- A wrong output value that violates the expected behavior
- A description explaining why this output is wrong and which requirement it
violates)TPL",
     R"TPL(I'll generate {test_count} negative output test cases with valid inputs but
wrong outputs.

```json
{testcases_json}
```)TPL"},
    {"adversarial_test_gen",
     R"TPL(You are an expert in Lean 4 software testing and verification. Your task is
to generate adversarial test cases designed to find potential bugs in Lean 4
specifications.

Adversarial tests are carefully crafted inputs that target:
- Edge cases and boundary conditions (e.g., empty arrays, maximum values,
zero)
- Corner cases that might be overlooked
- Inputs that might expose logical errors in the specification

These tests help ensure the Lean 4 specification is robust and correctly
handles all valid inputs.)TPL",
     R"TPL(Generate adversarial test cases to find potential bugs in this
specification.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

## Current Specification
```lean
{spec}
```

Please generate test cases that target edge cases and boundary conditions.
Focus on inputs that might expose specification bugs. For each test, explain
why it might find a bug.)TPL",
     R"TPL(I'll generate {test_count} adversarial test cases targeting edge cases and
boundary conditions that might expose specification bugs.

```json
{testcases_json}
```)TPL"},
    {"test_mapping",
     R"TPL(You are an expert in Lean 4 formal verification. Your task is to analyze
test cases and determine which requirements they help verify for a Lean 4
specification.

For each requirement, you should assess:
- Whether the test case validates or covers this requirement
- Your confidence level in this assessment
- A brief explanation of your reasoning)TPL",
     R"TPL(Analyze which requirements this test case validates or covers.

## Requirements
{requirements_json}

## Test Case
Input: {test_input}
Expected Output: {test_output}

For each requirement, determine whether this test case validates it and
explain your reasoning.)TPL",
     R"TPL(I'll analyze which requirements this test case validates:

**{req_id}**: This test {status} this requirement ({confidence} confidence).
{reason}

```json
{detailed_mapping}
```)TPL"},
    {"verdict_unknown",
     R"TPL(You are a Lean 4 formal verification expert. Your task is to determine
whether a Lean 4 specification condition will evaluate to TRUE or FALSE for
a given test case.

Analyze the Lean 4 specification logic carefully and determine the
evaluation result.
Provide clear reasoning for your conclusion.)TPL",
     R"TPL(Determine if this {component} will evaluate to TRUE or FALSE.

## Specification
```lean
{spec}
```

## Test Case
Type: {test_type}
Input: {test_input}
Output: {test_output}

**Test Type Explanation:**
- **positive**: Valid inputs that should produce correct outputs
- **neg_input**: Invalid inputs that violate preconditions (should fail
precondition check)
- **neg_output**: Valid inputs with wrong outputs (should pass precondition
but fail postcondition)

## Task
Analyze whether the {component} condition evaluates to TRUE or FALSE for
this test case. Explain your reasoning step by step, then provide your final
answer.)TPL",
     R"TPL(Let me analyze the {component} for this test case.

{reasoning}

**Answer: {eval_result}**)TPL"},
};

}  // namespace tracespec::llm::detail
